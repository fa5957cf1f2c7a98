#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <thread>

#include "ary/review.hpp"

namespace httplib {
class Server;
}

namespace ary {

struct ServerOptions {
  /// Built review UI bundle, served at "/".
  std::optional<std::filesystem::path> static_dir;
  std::size_t default_page_limit = 50;
  std::size_t default_context_limit = 10;
  std::size_t default_lexicon_limit = 20;
};

/// JSON routes:
///   GET  /pairs?status=&offset=&limit=
///   GET  /contexts?word=&limit=
///   POST /decisions
///   GET  /export/reference   (TSV)
///   GET  /stats
///   GET  /guidelines         (Markdown)
///   GET  /lexicon?q=&limit=
class ReviewServer {
 public:
  ReviewServer(ReviewService& service, ServerOptions options = {});
  ~ReviewServer();
  ReviewServer(const ReviewServer&) = delete;
  ReviewServer& operator=(const ReviewServer&) = delete;

  /// Port 0 picks a free port. Returns the bound port.
  int bind(const std::string& host, int port);
  /// Blocks until stop().
  void listen();
  /// listen() on a background thread; returns once requests are accepted.
  void start();
  void stop();

 private:
  void routes();

  ReviewService& service_;
  ServerOptions options_;
  std::unique_ptr<httplib::Server> http_;
  std::thread thread_;
};

}  // namespace ary
