#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "wpt/calibration.hpp"
#include "wpt/cut_engine.hpp"

namespace wpt {

struct HttpResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

/// Local JSON service backing the sheet designer. State is one immutable
/// snapshot (spec, scenario, report) swapped atomically by PUT /spec and
/// POST /cut; readers never see a half-updated state.
class SheetService {
 public:
  SheetService(SheetSpec initial, Calibration cal);

  /// Routes one request. `query` holds the raw query string (may be empty).
  HttpResponse handle(const std::string& method, const std::string& path, const std::string& body,
                      const std::string& query = "") const;

  /// Blocks serving on host:port. Port 0 picks a free port; `on_bound`
  /// receives the bound port before serving starts.
  void serve(const std::string& host, int port, void (*on_bound)(int) = nullptr);

  /// Starts serving on a background thread; returns the bound port.
  int start_background(const std::string& host = "127.0.0.1");
  void stop();
  ~SheetService();

 private:
  struct State;
  std::shared_ptr<const State> snapshot() const;
  void publish(std::shared_ptr<const State> next) const;

  HttpResponse get_spec() const;
  HttpResponse put_spec(const std::string& body) const;
  HttpResponse post_cut(const std::string& body) const;
  HttpResponse post_sim_step(const std::string& body) const;
  HttpResponse get_analysis() const;
  HttpResponse get_geometry(const std::string& query) const;

  Calibration cal_;
  mutable std::mutex state_mutex_;  // guards the pointer swap only
  mutable std::mutex write_mutex_;  // serializes writers
  mutable std::shared_ptr<const State> state_;

  struct Runner;
  std::unique_ptr<Runner> runner_;
};

}  // namespace wpt
