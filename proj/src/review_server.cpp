#include "ary/review_server.hpp"

#include <httplib.h>

#include <nlohmann/json.hpp>

#include "ary/error.hpp"
#include "ary/text.hpp"

namespace ary {

using nlohmann::json;

namespace {

struct BadRequest : Error {
  using Error::Error;
};

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& message) {
  send_json(res, status, json{{"error", message}});
}

std::size_t size_param(const httplib::Request& req, const char* name, std::size_t fallback) {
  if (!req.has_param(name)) return fallback;
  const auto raw = req.get_param_value(name);
  long long v = 0;
  try {
    v = parse_int(raw);
  } catch (const Error&) {
    throw BadRequest(std::string(name) + ": expected a non-negative integer");
  }
  if (v < 0) throw BadRequest(std::string(name) + ": expected a non-negative integer");
  return static_cast<std::size_t>(v);
}

json pair_json(const PairView& v) {
  json j{{"translit", v.pair->translit},
         {"canonical", v.pair->canonical},
         {"semantic_score", v.pair->semantic_score},
         {"lexical_score", v.pair->lexical_score},
         {"sources", v.pair->sources},
         {"status", to_string(v.status)},
         {"conflict_set", v.conflict_set}};
  j["chosen_canonical"] = v.chosen_canonical ? json(*v.chosen_canonical) : json(nullptr);
  return j;
}

}  // namespace

ReviewServer::ReviewServer(ReviewService& service, ServerOptions options)
    : service_(service), options_(std::move(options)), http_(std::make_unique<httplib::Server>()) {
  routes();
}

ReviewServer::~ReviewServer() { stop(); }

void ReviewServer::routes() {
  auto& s = *http_;

  // Handlers throw BadRequest for 400s; anything else escaping is a 500.
  auto guarded = [](auto fn) {
    return [fn](const httplib::Request& req, httplib::Response& res) {
      try {
        fn(req, res);
      } catch (const BadRequest& e) {
        send_error(res, 400, e.what());
      }
    };
  };

  s.Get("/pairs", guarded([this](const httplib::Request& req, httplib::Response& res) {
    std::optional<PairStatus> filter;
    if (req.has_param("status")) {
      filter = parse_status(req.get_param_value("status"));
      if (!filter) throw BadRequest("status: expected pending, accepted, rejected or remapped");
    }
    const auto offset = size_param(req, "offset", 0);
    const auto limit = size_param(req, "limit", options_.default_page_limit);
    const auto snap = service_.snapshot();
    const auto page = snap->page(filter, offset, limit);
    json items = json::array();
    for (const auto& v : page.items) items.push_back(pair_json(v));
    send_json(res, 200, json{{"total", page.total}, {"offset", offset}, {"limit", limit}, {"items", items}});
  }));

  s.Get("/contexts", guarded([this](const httplib::Request& req, httplib::Response& res) {
    if (!req.has_param("word") || req.get_param_value("word").empty()) throw BadRequest("word: required");
    const auto limit = size_param(req, "limit", options_.default_context_limit);
    if (limit == 0) throw BadRequest("limit: must be positive");
    json out = json::array();
    for (const auto& c : contexts(service_.corpus(), req.get_param_value("word"), limit))
      out.push_back(json{{"tokens", c.sentence->tokens}, {"highlight_index", c.highlight}});
    send_json(res, 200, out);
  }));

  s.Post("/decisions", [this](const httplib::Request& req, httplib::Response& res) {
    DecisionRequest dr;
    try {
      const auto body = json::parse(req.body);
      auto d = decision_from_json(body);
      if (d.reviewer.empty()) throw ParseError("reviewer: must not be empty");
      dr = DecisionRequest{std::move(d.pair), d.verdict, std::move(d.chosen_canonical), std::move(d.reviewer)};
    } catch (const json::exception& e) {
      return send_error(res, 400, std::string("malformed JSON: ") + e.what());
    } catch (const ParseError& e) {
      return send_error(res, 400, e.what());
    }
    try {
      send_json(res, 201, to_json(service_.record(dr)));
    } catch (const UnknownPair& e) {
      send_error(res, 404, e.what());
    } catch (const InvalidDecision& e) {
      send_error(res, 422, e.what());
    }
  });

  s.Get("/export/reference", [this](const httplib::Request&, httplib::Response& res) {
    res.set_content(format_reference(service_.snapshot()->export_reference()), "text/tab-separated-values");
  });

  s.Get("/stats", [this](const httplib::Request&, httplib::Response& res) {
    const auto st = service_.snapshot()->stats();
    send_json(res, 200,
              json{{"total", st.total},
                   {"pending", st.pending},
                   {"accepted", st.accepted},
                   {"rejected", st.rejected},
                   {"remapped", st.remapped},
                   {"running_precision", st.running_precision ? json(*st.running_precision) : json(nullptr)}});
  });

  s.Get("/guidelines", [](const httplib::Request&, httplib::Response& res) {
    res.set_content(std::string(review_guidelines()), "text/markdown; charset=utf-8");
  });

  s.Get("/lexicon", guarded([this](const httplib::Request& req, httplib::Response& res) {
    const auto q = req.has_param("q") ? req.get_param_value("q") : std::string();
    const auto limit = size_param(req, "limit", options_.default_lexicon_limit);
    json out = json::array();
    for (const auto& e : service_.lexicon().entries()) {
      if (out.size() >= limit) break;
      if (e.canonical.find(q) == std::string::npos) continue;
      out.push_back(json{{"canonical", e.canonical},
                         {"pos", e.pos ? json(to_string(*e.pos)) : json(nullptr)},
                         {"gloss", e.gloss},
                         {"origin", to_string(e.origin)}});
    }
    send_json(res, 200, out);
  }));

  s.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
    try {
      std::rethrow_exception(ep);
    } catch (const std::exception& e) {
      send_error(res, 500, e.what());
    } catch (...) {
      send_error(res, 500, "internal error");
    }
  });

  if (options_.static_dir) {
    if (!s.set_mount_point("/", options_.static_dir->string()))
      throw InvalidArgument("static directory not found: " + options_.static_dir->string());
  }
}

int ReviewServer::bind(const std::string& host, int port) {
  if (port == 0) {
    const int p = http_->bind_to_any_port(host);
    if (p < 0) throw Error("cannot bind " + host);
    return p;
  }
  if (!http_->bind_to_port(host, port)) throw Error("cannot bind " + host + ":" + std::to_string(port));
  return port;
}

void ReviewServer::listen() {
  if (!http_->listen_after_bind()) throw Error("server stopped with an error");
}

void ReviewServer::start() {
  thread_ = std::thread([this] { http_->listen_after_bind(); });
  http_->wait_until_ready();
}

void ReviewServer::stop() {
  if (http_->is_running()) http_->stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace ary
