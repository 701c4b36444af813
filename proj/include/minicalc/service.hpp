#pragma once

// Local JSON check service consumed by the browser proof editor.
//
//   POST /check     {"source": "<proof text>"}  -> check report
//   GET  /examples  bundled example proofs
//   GET  /health    {"status":"ok"}
//
// Handlers are pure functions of the request body.

#include <chrono>
#include <cstdlib>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include <httplib.h>
#include <json.hpp>

#include "minicalc/analysis.hpp"
#include "minicalc/fixtures.hpp"
#include "minicalc/report_json.hpp"

namespace minicalc {

struct ServiceOptions {
  std::size_t max_body = 1u << 20;
  std::chrono::milliseconds time_budget{5000};
  std::string theory_name = "Result";
};

/// Reads MINICALC_MAX_BODY (bytes) when set to a positive integer.
inline ServiceOptions service_options_from_env() {
  ServiceOptions o;
  if (const char* v = std::getenv("MINICALC_MAX_BODY")) {
    char* end = nullptr;
    const unsigned long long n = std::strtoull(v, &end, 10);
    if (end && *end == '\0' && n > 0) o.max_body = static_cast<std::size_t>(n);
  }
  return o;
}

struct ServiceResponse {
  int status = 200;
  std::string body;
};

inline std::string error_body(std::string_view message) { return Json{{"error", message}}.dump(); }

inline ServiceResponse handle_check(std::string_view body, const ServiceOptions& options = {}) {
  if (body.size() > options.max_body)
    return {413, error_body("request body exceeds " + std::to_string(options.max_body) + " bytes")};
  nlohmann::json request = nlohmann::json::parse(body, nullptr, false);
  if (request.is_discarded()) return {400, error_body("malformed JSON")};
  if (!request.is_object() || !request.contains("source") || !request["source"].is_string())
    return {400, error_body("expected an object with a string field \"source\"")};
  const std::string source = request["source"].get<std::string>();

  AnalysisOptions ao;
  ao.export_options.theory_name = options.theory_name;
  ao.deadline = Deadline::after(options.time_budget);
  try {
    const Analysis a = analyze(source, ao);
    return {200, report_json(a, source).dump()};
  } catch (const TimedOut&) {
    Json j;
    j["error"] = "check timed out";
    j["diagnostics"] = Json::array({Json{{"start", 0}, {"end", 0}, {"line", 1}, {"col", 1}, {"message", "check timed out"}}});
    return {422, j.dump()};
  }
}

inline ServiceResponse handle_examples() {
  Json list = Json::array();
  for (const Fixture& f : fixtures())
    list.push_back(Json{{"name", f.name}, {"title", f.title}, {"source", f.source}});
  return {200, Json{{"examples", std::move(list)}}.dump()};
}

inline ServiceResponse handle_health() { return {200, Json{{"status", "ok"}}.dump()}; }

/// Registers the routes on `server`.
inline void install_routes(httplib::Server& server, const ServiceOptions& options) {
  server.set_payload_max_length(options.max_body);
  auto reply = [](httplib::Response& res, const ServiceResponse& r) {
    res.status = r.status;
    res.set_content(r.body, "application/json; charset=utf-8");
  };
  server.Post("/check", [options, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, handle_check(req.body, options));
  });
  server.Get("/examples", [reply](const httplib::Request&, httplib::Response& res) { reply(res, handle_examples()); });
  server.Get("/health", [reply](const httplib::Request&, httplib::Response& res) { reply(res, handle_health()); });
  server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (res.status == 413) res.set_content(error_body("request body too large"), "application/json; charset=utf-8");
  });
}

}  // namespace minicalc
