#include "agriopt/service.hpp"

#include <httplib.h>

#include <chrono>
#include <thread>

#include "agriopt/csv.hpp"
#include "agriopt/runs.hpp"

namespace agriopt {

using nlohmann::json;

namespace {

std::string error_body(const std::string& message) { return json{{"error", message}}.dump(); }

}  // namespace

EscaService::EscaService(DatasetBundle bundle, SimplexConfig cfg) : bundle_(std::move(bundle)), cfg_(cfg) {
  if (bundle_.kind != ModelKind::esca) throw std::invalid_argument("the service runs on esca bundles only");
  bundle_body_ = bundle_summary(bundle_).dump();
}

HttpReply EscaService::handle_bundle() const { return {200, bundle_body_, 0.0}; }

HttpReply EscaService::handle_solve(const std::string& body) const {
  json request;
  try {
    request = json::parse(body);
  } catch (const json::parse_error& e) {
    return {400, error_body(std::string("request is not valid JSON: ") + e.what()), 0.0};
  }
  EscaInstance inst;
  try {
    inst = apply_esca_request(bundle_.esca(), request);
  } catch (const RequestError& e) {
    return {400, error_body(e.what()), 0.0};
  }
  const auto t0 = std::chrono::steady_clock::now();
  SolveResult res;
  try {
    res = solve_esca(inst, cfg_);
  } catch (const std::invalid_argument& e) {
    return {400, error_body(e.what()), 0.0};
  }
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

  const std::string scenario = request.is_object() ? request.value("scenario", std::string()) : std::string();
  json out = esca_result_json(scenario, inst.weights, res);
  out["request_id"] = request.contains("id") ? request["id"] : json(nullptr);
  out["bundle_hash"] = bundle_.content_hash;
  return {res.optimal() ? 200 : 422, out.dump(), ms};
}

bool run_server(const EscaService& service, const std::string& host, int port, const std::function<void(int)>& on_listen,
                const std::atomic<bool>* stop) {
  httplib::Server svr;
  svr.Get("/api/bundle", [&](const httplib::Request&, httplib::Response& res) {
    const auto r = service.handle_bundle();
    res.status = r.status;
    res.set_content(r.body, "application/json");
  });
  svr.Post("/api/solve", [&](const httplib::Request& req, httplib::Response& res) {
    const auto r = service.handle_solve(req.body);
    res.status = r.status;
    res.set_header("X-Solve-Time-Ms", format_sig(r.solve_ms));
    res.set_content(r.body, "application/json");
  });

  const int bound = port == 0 ? svr.bind_to_any_port(host) : (svr.bind_to_port(host, port) ? port : -1);
  if (bound <= 0) return false;
  if (on_listen) on_listen(bound);

  std::thread watcher;
  std::atomic<bool> done{false};
  if (stop) {
    watcher = std::thread([&] {
      while (!done && !stop->load()) std::this_thread::sleep_for(std::chrono::milliseconds(20));
      svr.stop();
    });
  }
  svr.listen_after_bind();
  done = true;
  if (watcher.joinable()) watcher.join();
  return true;
}

}  // namespace agriopt
