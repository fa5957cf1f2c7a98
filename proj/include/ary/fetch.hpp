#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ary/corpus.hpp"
#include "ary/error.hpp"

namespace ary {

/// Raised by a PageSource when the transport failed; the fetch loop retries it.
class TransportError : public Error {
 public:
  using Error::Error;
};

class FetchError : public Error {
 public:
  FetchError(const std::string& what, bool retryable, int attempts)
      : Error(what), retryable_(retryable), attempts_(attempts) {}

  bool retryable() const noexcept { return retryable_; }
  int attempts() const noexcept { return attempts_; }

 private:
  bool retryable_;
  int attempts_;
};

/// One page request: returns the raw JSON body
/// `{"items":[{"id":..,"text":..}], "next_cursor": <string|null>}`.
class PageSource {
 public:
  virtual ~PageSource() = default;
  virtual std::string fetch_page(const std::optional<std::string>& cursor) = 0;
  virtual std::string describe() const = 0;
};

/// Pages stored as files in one directory. The first page is `first`; a
/// cursor names the next file relative to the same directory.
class FilePageSource : public PageSource {
 public:
  explicit FilePageSource(std::filesystem::path first);
  std::string fetch_page(const std::optional<std::string>& cursor) override;
  std::string describe() const override;

 private:
  std::filesystem::path first_;
};

/// Plain-HTTP GET of `url`, with `cursor=<c>` appended for later pages.
class HttpPageSource : public PageSource {
 public:
  explicit HttpPageSource(std::string url,
                          std::chrono::milliseconds timeout = std::chrono::milliseconds(5000));
  std::string fetch_page(const std::optional<std::string>& cursor) override;
  std::string describe() const override;

 private:
  std::string scheme_host_port_;
  std::string path_;
  std::chrono::milliseconds timeout_;
};

struct RetryPolicy {
  int max_attempts = 3;
  std::chrono::milliseconds backoff{100};
};

/// "http://..." selects HttpPageSource, "file://<path>" or any other string a
/// FilePageSource.
std::unique_ptr<PageSource> make_page_source(const std::string& endpoint);

/// Follows pagination until `max_items` comments or the last page.
std::vector<RawComment> fetch_comments(PageSource& source, std::size_t max_items,
                                       const RetryPolicy& retry = {});

}  // namespace ary
