#include "wpt/service.hpp"

#include <map>
#include <sstream>
#include <thread>

#include "httplib.h"
#include "wpt/export.hpp"
#include "wpt/json_io.hpp"

namespace wpt {

using io::Json;

struct SheetService::State {
  SheetSpec spec;
  std::vector<Violation> violations;
  std::optional<RoutingTree> tree;  // present iff the spec is valid
  CutScenario scenario;
  std::optional<CutReport> report;
};

struct SheetService::Runner {
  httplib::Server server;
  std::thread thread;
};

namespace {

HttpResponse json_response(int status, const Json& j) { return {status, j.dump(), "application/json"}; }

HttpResponse error(int status, const std::string& kind, const std::string& msg,
                   const std::vector<Violation>& v = {}) {
  return json_response(status, io::error_json(kind, msg, v));
}

std::map<std::string, std::string> parse_query(const std::string& q) {
  std::map<std::string, std::string> out;
  std::istringstream in(q);
  std::string kv;
  while (std::getline(in, kv, '&')) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) out[kv] = "";
    else out[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  return out;
}

}  // namespace

SheetService::SheetService(SheetSpec initial, Calibration cal) : cal_(std::move(cal)) {
  auto st = std::make_shared<State>();
  st->spec = std::move(initial);
  st->violations = validate_sheet(st->spec);
  if (st->violations.empty()) st->tree = build_htree(st->spec.grid_order, st->spec.pitch);
  state_ = std::move(st);
}

SheetService::~SheetService() { stop(); }

std::shared_ptr<const SheetService::State> SheetService::snapshot() const {
  std::lock_guard lock(state_mutex_);
  return state_;
}

void SheetService::publish(std::shared_ptr<const State> next) const {
  std::lock_guard lock(state_mutex_);
  state_ = std::move(next);
}

HttpResponse SheetService::handle(const std::string& method, const std::string& path, const std::string& body,
                                  const std::string& query) const {
  try {
    if (path == "/spec" && method == "GET") return get_spec();
    if (path == "/spec" && method == "PUT") return put_spec(body);
    if (path == "/cut" && method == "POST") return post_cut(body);
    if (path == "/sim/step" && method == "POST") return post_sim_step(body);
    if (path == "/analysis" && method == "GET") return get_analysis();
    if (path == "/geometry" && method == "GET") return get_geometry(query);
    if (path == "/spec" || path == "/cut" || path == "/sim/step" || path == "/analysis" || path == "/geometry")
      return error(405, "method_not_allowed", method + " " + path);
    return error(404, "not_found", path);
  } catch (const InputError& e) {
    return error(400, "input_error", e.what());
  } catch (const ValidationError& e) {
    return error(400, "validation_error", e.what());
  } catch (const DomainError& e) {
    return error(422, "domain_error", e.what());
  } catch (const std::exception& e) {
    return error(500, "internal_error", e.what());
  }
}

HttpResponse SheetService::get_spec() const {
  const auto st = snapshot();
  return {200, io::canonical(io::to_json(st->spec)), "application/json"};
}

HttpResponse SheetService::put_spec(const std::string& body) const {
  const SheetSpec spec = io::load_spec(body);  // InputError -> 400, state untouched
  auto next = std::make_shared<State>();
  next->spec = spec;
  next->violations = validate_sheet(spec);
  if (next->violations.empty()) next->tree = build_htree(spec.grid_order, spec.pitch);
  {
    std::lock_guard w(write_mutex_);
    publish(next);
  }
  if (!next->violations.empty())
    return error(400, "validation_error", "spec stored but invalid", next->violations);
  Json out{{"ok", true}, {"warnings", layout_warnings(spec)}};
  return json_response(200, out);
}

HttpResponse SheetService::post_cut(const std::string& body) const {
  const CutScenario sc = io::scenario_from_json(io::parse(body, "scenario"));
  std::lock_guard w(write_mutex_);
  const auto st = snapshot();
  if (!st->tree) return error(409, "invalid_spec", "current spec is invalid", st->violations);
  auto next = std::make_shared<State>(*st);
  next->report = apply_cuts(st->spec, *st->tree, sc, cal_);  // ValidationError -> 400
  next->scenario = sc;
  publish(next);
  return json_response(200, io::to_json(*next->report, st->spec.coil.xsec));
}

HttpResponse SheetService::post_sim_step(const std::string& body) const {
  const Json j = io::parse(body, "sim step");
  if (!j.is_object() || !j.contains("x") || !j.contains("y") || !j["x"].is_number() || !j["y"].is_number())
    throw InputError("sim step needs numeric x and y (mm)");
  const auto st = snapshot();
  if (!st->tree) return error(409, "invalid_spec", "current spec is invalid", st->violations);

  std::set<CoilIndex> surviving;
  if (st->report) {
    surviving = st->report->surviving_coils;
  } else {
    for (const auto& [idx, _] : st->tree->leaves) surviving.insert(idx);
  }
  RxDevice rx;
  rx.coil = st->spec.coil;
  for (const char* k : {"height", "q_rx"})
    if (j.contains(k) && !j[k].is_number()) throw InputError(std::string("sim step field ") + k + " must be a number");
  if (j.contains("height")) rx.height_mm = j["height"].get<double>();
  if (j.contains("q_rx")) rx.q_rx = j["q_rx"].get<double>();
  const Policy policy = j.contains("policy") ? io::policy_from_json(j["policy"]) : Policy{};
  const auto ctx = make_context(st->spec, surviving, cal_);
  const auto s = step_state(ctx, rx, policy, j["x"].get<double>(), j["y"].get<double>());
  return json_response(200, io::to_json(s));
}

HttpResponse SheetService::get_analysis() const {
  const auto st = snapshot();
  if (!st->tree) return error(409, "invalid_spec", "analysis requested while the spec is invalid", st->violations);
  const auto& s = st->spec;
  Json out;
  out["mech"] = io::to_json(mech_report(s, cal_));
  const auto win = feasible_window(s, cal_);
  out["feasible_window"] = win.feasible ? Json{{"t_min", win.t_min.mm()}, {"t_max", win.t_max.mm()}}
                                        : Json{{"infeasible", true}};
  try {
    out["electrical"] = io::to_json(q_factor(s.coil, s.materials, s.frequency, cal_));
  } catch (const DomainError& e) {
    out["electrical"] = io::error_json("domain_error", e.what());
  }
  out["sheet_thickness"] = sheet_thickness(s.coil.xsec).mm();
  out["warnings"] = layout_warnings(s);
  out["survivor_count"] = st->report ? st->report->surviving_coils.size() : st->tree->leaves.size();
  return json_response(200, out);
}

HttpResponse SheetService::get_geometry(const std::string& query) const {
  const auto st = snapshot();
  if (!st->tree) return error(409, "invalid_spec", "current spec is invalid", st->violations);
  const auto q = parse_query(query);
  const auto svg = [&](LayerRole role) {
    return st->report ? exporter::layer_svg_post_cut(st->spec, *st->tree, st->scenario, *st->report, role)
                      : exporter::layer_svg(st->spec, *st->tree, role);
  };
  if (auto f = q.find("format"); f != q.end() && f->second == "svg") {
    const auto l = q.find("layer");
    const LayerRole role = layer_role_from_string(l == q.end() ? "coil" : l->second);
    return {200, svg(role), "image/svg+xml"};
  }
  Json layers;
  for (auto role : st->spec.layers) layers[to_string(role)] = svg(role);
  Json out{{"tree", io::to_json(*st->tree)}, {"layers", layers}};
  out["report"] = st->report ? io::to_json(*st->report, st->spec.coil.xsec) : Json(nullptr);
  std::vector<Json> coils;
  for (const auto& [idx, _] : st->tree->leaves) {
    const auto [lo, hi] = coil_footprint(st->spec, idx);
    coils.push_back({{"coil", {idx.row, idx.col}},
                     {"min", {lo.x / 1000.0, lo.y / 1000.0}},
                     {"max", {hi.x / 1000.0, hi.y / 1000.0}}});
  }
  out["coils"] = coils;
  out["side"] = st->spec.side().mm();
  return json_response(200, out);
}

namespace {

void bind_routes(httplib::Server& srv, const SheetService& svc) {
  const auto adapt = [&svc](const char* method) {
    return [&svc, method](const httplib::Request& req, httplib::Response& res) {
      std::string query;
      for (const auto& [k, v] : req.params) query += (query.empty() ? "" : "&") + k + "=" + v;
      const auto r = svc.handle(method, req.path, req.body, query);
      res.status = r.status;
      res.set_content(r.body, r.content_type);
    };
  };
  for (const char* p : {"/spec", "/cut", "/sim/step", "/analysis", "/geometry"}) {
    srv.Get(p, adapt("GET"));
    srv.Put(p, adapt("PUT"));
    srv.Post(p, adapt("POST"));
  }
}

}  // namespace

void SheetService::serve(const std::string& host, int port, void (*on_bound)(int)) {
  httplib::Server srv;
  bind_routes(srv, *this);
  const int bound = port == 0 ? srv.bind_to_any_port(host) : (srv.bind_to_port(host, port) ? port : -1);
  if (bound < 0) throw DomainError("cannot bind " + host + ":" + std::to_string(port));
  if (on_bound) on_bound(bound);
  srv.listen_after_bind();
}

int SheetService::start_background(const std::string& host) {
  stop();
  runner_ = std::make_unique<Runner>();
  bind_routes(runner_->server, *this);
  const int port = runner_->server.bind_to_any_port(host);
  if (port < 0) throw DomainError("cannot bind " + host);
  runner_->thread = std::thread([r = runner_.get()] { r->server.listen_after_bind(); });
  runner_->server.wait_until_ready();
  return port;
}

void SheetService::stop() {
  if (!runner_) return;
  runner_->server.stop();
  if (runner_->thread.joinable()) runner_->thread.join();
  runner_.reset();
}

}  // namespace wpt
