#include "ary/fetch.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

namespace ary {

FilePageSource::FilePageSource(std::filesystem::path first) : first_(std::move(first)) {}

std::string FilePageSource::fetch_page(const std::optional<std::string>& cursor) {
  const auto path = cursor ? first_.parent_path() / *cursor : first_;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw TransportError("cannot open page " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string FilePageSource::describe() const { return "file://" + first_.string(); }

HttpPageSource::HttpPageSource(std::string url, std::chrono::milliseconds timeout)
    : timeout_(timeout) {
  const auto scheme_end = url.find("://");
  const auto path_start = url.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
  if (path_start == std::string::npos) {
    scheme_host_port_ = url;
    path_ = "/";
  } else {
    scheme_host_port_ = url.substr(0, path_start);
    path_ = url.substr(path_start);
  }
}

std::string HttpPageSource::fetch_page(const std::optional<std::string>& cursor) {
  httplib::Client client(scheme_host_port_);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout_);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(timeout_ - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  std::string target = path_;
  if (cursor) {
    target += (target.find('?') == std::string::npos ? "?" : "&");
    target += "cursor=" + httplib::detail::encode_query_param(*cursor);
  }
  auto res = client.Get(target);
  if (!res) throw TransportError("request to " + describe() + " failed: " + httplib::to_string(res.error()));
  if (res->status >= 500 || res->status == 429)
    throw TransportError("server returned HTTP " + std::to_string(res->status));
  if (res->status != 200)
    throw FetchError("server returned HTTP " + std::to_string(res->status), false, 1);
  return res->body;
}

std::string HttpPageSource::describe() const { return scheme_host_port_ + path_; }

std::unique_ptr<PageSource> make_page_source(const std::string& endpoint) {
  if (endpoint.starts_with("http://") || endpoint.starts_with("https://"))
    return std::make_unique<HttpPageSource>(endpoint);
  if (endpoint.starts_with("file://"))
    return std::make_unique<FilePageSource>(endpoint.substr(7));
  return std::make_unique<FilePageSource>(endpoint);
}

namespace {

struct Page {
  std::vector<RawComment> items;
  std::optional<std::string> next;
};

Page parse_page(const std::string& body, const std::string& source, int attempts) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(body);
  } catch (const nlohmann::json::exception&) {
    throw FetchError("malformed page: body is not JSON", false, attempts);
  }
  if (!j.is_object()) throw FetchError("malformed page: top level is not an object", false, attempts);
  if (!j.contains("items") || !j["items"].is_array())
    throw FetchError("malformed page: field 'items' missing or not an array", false, attempts);
  Page page;
  std::size_t n = 0;
  for (const auto& item : j["items"]) {
    const std::string where = "items[" + std::to_string(n++) + "]";
    if (!item.is_object()) throw FetchError("malformed page: field '" + where + "' is not an object", false, attempts);
    if (!item.contains("id") || !(item["id"].is_string() || item["id"].is_number()))
      throw FetchError("malformed page: field '" + where + ".id' missing", false, attempts);
    if (!item.contains("text") || !item["text"].is_string())
      throw FetchError("malformed page: field '" + where + ".text' missing or not a string", false, attempts);
    RawComment c;
    c.id = item["id"].is_string() ? item["id"].get<std::string>() : item["id"].dump();
    c.text = item["text"].get<std::string>();
    c.source = source;
    page.items.push_back(std::move(c));
  }
  if (j.contains("next_cursor") && !j["next_cursor"].is_null()) {
    if (!j["next_cursor"].is_string())
      throw FetchError("malformed page: field 'next_cursor' is not a string", false, attempts);
    const auto next = j["next_cursor"].get<std::string>();
    if (!next.empty()) page.next = next;
  }
  return page;
}

}  // namespace

std::vector<RawComment> fetch_comments(PageSource& source, std::size_t max_items, const RetryPolicy& retry) {
  if (max_items < 1) throw InvalidArgument("max_items must be >= 1");
  std::vector<RawComment> out;
  std::optional<std::string> cursor;
  std::set<std::string> seen_cursors;
  for (;;) {
    std::string body;
    int attempt = 0;
    for (;;) {
      ++attempt;
      try {
        body = source.fetch_page(cursor);
        break;
      } catch (const TransportError& e) {
        if (attempt >= retry.max_attempts)
          throw FetchError(std::string(e.what()) + " (after " + std::to_string(attempt) + " attempts)", true,
                           attempt);
        std::this_thread::sleep_for(retry.backoff * attempt);
      }
    }
    auto page = parse_page(body, source.describe(), attempt);
    for (auto& c : page.items) {
      if (out.size() >= max_items) return out;
      out.push_back(std::move(c));
    }
    if (out.size() >= max_items || !page.next) return out;
    if (!seen_cursors.insert(*page.next).second)
      throw FetchError("malformed page: field 'next_cursor' repeats '" + *page.next + "'", false, attempt);
    cursor = page.next;
  }
}

}  // namespace ary
