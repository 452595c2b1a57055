#pragma once

// HTTP re-solve service for ESCA bundles. No authentication: meant for a
// trusted workshop network only.

#include <atomic>
#include <cstdint>
#include <functional>
#include <string>

#include "agriopt/io.hpp"
#include "agriopt/simplex.hpp"

namespace agriopt {

struct HttpReply {
  int status = 200;
  std::string body;   // JSON
  double solve_ms = 0.0;
};

/// Stateless request handling over an immutable bundle. Safe to call from
/// several threads at once.
class EscaService {
 public:
  explicit EscaService(DatasetBundle bundle, SimplexConfig cfg = {});

  HttpReply handle_bundle() const;
  /// 200 on optimal, 400 on a malformed request, 422 when the model has no
  /// optimum (body carries the status and the violated rows).
  HttpReply handle_solve(const std::string& body) const;

  const DatasetBundle& bundle() const { return bundle_; }

 private:
  DatasetBundle bundle_;
  SimplexConfig cfg_;
  std::string bundle_body_;
};

/// Serves GET /api/bundle and POST /api/solve until `stop` becomes true or
/// the process ends. Port 0 picks a free port; `on_listen` receives the
/// bound port before serving starts. Returns false if binding failed.
bool run_server(const EscaService& service, const std::string& host, int port,
                const std::function<void(int)>& on_listen = {}, const std::atomic<bool>* stop = nullptr);

}  // namespace agriopt
