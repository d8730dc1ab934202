#include <cstdlib>

#include <httplib.h>
#include <json.hpp>

#include "radrisk/acquisition.hpp"
#include "radrisk/error.hpp"

namespace radrisk::acquisition {

using nlohmann::json;

HttpTimelineSource::HttpTimelineSource(std::string base_url, std::string bearer_token)
    : bearer_token_(std::move(bearer_token)) {
  const auto scheme_end = base_url.find("://");
  if (scheme_end == std::string::npos) throw UsageError("base URL needs a scheme: " + base_url);
  const auto path_start = base_url.find('/', scheme_end + 3);
  scheme_host_port_ = base_url.substr(0, path_start);
  path_prefix_ = path_start == std::string::npos ? "" : base_url.substr(path_start);
  while (!path_prefix_.empty() && path_prefix_.back() == '/') path_prefix_.pop_back();
}

std::string HttpTimelineSource::bearer_token_from_env() {
  for (const char* name : {"RADRISK_BEARER_TOKEN", "TWITTER_BEARER_TOKEN"}) {
    if (const char* v = std::getenv(name); v && *v) return v;
  }
  return {};
}

Page parse_timeline_response(std::string_view body, const std::string& handle) {
  Page page;
  json arr;
  try {
    arr = json::parse(body);
  } catch (const json::parse_error& e) {
    page.status = PageStatus::error;
    page.message = std::string("unparsable timeline response: ") + e.what();
    return page;
  }
  if (!arr.is_array()) {
    page.status = PageStatus::error;
    page.message = "timeline response is not an array";
    return page;
  }
  unsigned long long min_id = 0;
  try {
    for (const auto& obj : arr) {
      corpus::Tweet t;
      t.user_id = handle;
      t.tweet_id = obj.contains("id_str") ? obj["id_str"].get<std::string>()
                                          : std::to_string(obj.at("id").get<unsigned long long>());
      if (obj.contains("full_text")) {
        t.text = obj["full_text"].get<std::string>();
      } else {
        t.text = obj.value("text", std::string());
      }
      if (obj.contains("created_at") && obj["created_at"].is_string()) t.timestamp = obj["created_at"];
      const unsigned long long id = std::stoull(t.tweet_id);
      if (min_id == 0 || id < min_id) min_id = id;
      page.tweets.push_back(std::move(t));
    }
  } catch (const std::exception& e) {
    Page bad;
    bad.status = PageStatus::error;
    bad.message = std::string("malformed tweet in timeline response: ") + e.what();
    return bad;
  }
  if (min_id > 1) page.next_cursor = std::to_string(min_id - 1);
  return page;
}

Page HttpTimelineSource::fetch_page(const PageRequest& request) {
  httplib::Client client(scheme_host_port_);
  client.set_connection_timeout(10);
  client.set_read_timeout(30);
  httplib::Headers headers;
  if (!bearer_token_.empty()) headers.emplace("Authorization", "Bearer " + bearer_token_);

  httplib::Params params{{"screen_name", request.handle},
                         {"count", std::to_string(request.count)},
                         {"tweet_mode", "extended"},
                         {"include_rts", "true"}};
  if (request.cursor) params.emplace("max_id", *request.cursor);
  const std::string path =
      httplib::append_query_params(path_prefix_ + "/statuses/user_timeline.json", params);

  Page page;
  auto res = client.Get(path, headers);
  if (!res) {
    page.status = PageStatus::error;
    page.message = "transport error: " + httplib::to_string(res.error());
    return page;
  }
  switch (res->status) {
    case 200:
      return parse_timeline_response(res->body, request.handle);
    case 404:
      page.status = PageStatus::not_found;
      break;
    case 401:
    case 403:
      page.status = PageStatus::suspended;
      break;
    case 429: {
      page.status = PageStatus::rate_limited;
      if (res->has_header("Retry-After")) {
        page.retry_after_seconds = std::atof(res->get_header_value("Retry-After").c_str());
      }
      break;
    }
    default:
      page.status = PageStatus::error;
      break;
  }
  page.message = "HTTP " + std::to_string(res->status);
  return page;
}

}  // namespace radrisk::acquisition
