#include "wpt/protocol_sim.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "json.hpp"

#include "wpt/em_model.hpp"

namespace wpt {

std::string to_string(EventKind k) {
  switch (k) {
    case EventKind::detect_on: return "detect_on";
    case EventKind::detect_off: return "detect_off";
    case EventKind::switch_on: return "switch_on";
    case EventKind::switch_off: return "switch_off";
    case EventKind::power_sample: return "power_sample";
  }
  return "unknown";
}

SimContext make_context(const SheetSpec& spec, const std::set<CoilIndex>& surviving, const Calibration& cal) {
  SimContext ctx{spec, surviving, 0.0};
  ctx.q_tx = q_factor(spec.coil, spec.materials, spec.frequency, cal).q_factor;
  return ctx;
}

namespace {

double detect_radius(const SimContext& ctx, const Policy& p) {
  return p.r_detect_mm > 0.0 ? p.r_detect_mm : ctx.spec.pitch.mm() / 2.0;
}

bool on_sheet(const SimContext& ctx, double x, double y) {
  const double h = ctx.spec.side().mm() / 2.0;
  return std::abs(x) <= h && std::abs(y) <= h;
}

double distance_to(const SimContext& ctx, CoilIndex c, double x, double y) {
  const PointUm p = coil_center(ctx.spec, c);
  return std::hypot(x - p.x * 1e-3, y - p.y * 1e-3);
}

void check_inputs(const RxDevice& rx, const Policy& p) {
  if (!(rx.height_mm > 0.0) || !std::isfinite(rx.height_mm)) throw ValidationError("rx height must be > 0");
  if (!(rx.q_rx > 0.0) || !std::isfinite(rx.q_rx)) throw ValidationError("q_rx must be > 0");
  if (p.k_max < 1) throw ValidationError("k_max must be >= 1");
  if (!(p.hysteresis >= 0.0) || !std::isfinite(p.hysteresis)) throw ValidationError("hysteresis must be >= 0");
  if (!(p.input_power >= 0.0) || !std::isfinite(p.input_power)) throw ValidationError("input_power must be >= 0");
}

double power_from_mutual(const SimContext& ctx, const RxDevice& rx, const Policy& p, double mutual) {
  const double k = std::abs(mutual) / std::sqrt(coil_inductance(ctx.spec.coil) * coil_inductance(rx.coil));
  if (!(k < 1.0)) throw DomainError("coupling coefficient not below 1; RX too close to the sheet");
  return p.input_power * link_efficiency(ctx.q_tx, rx.q_rx, k);
}

double mutual_at_offset(const SimContext& ctx, const RxDevice& rx, double dx, double dy, bool parallel) {
  MutualOptions opt;
  opt.parallel = parallel;
  return mutual_inductance(ctx.spec.coil, CoilPose{0.0, 0.0, 0.0}, rx.coil, CoilPose{dx, dy, rx.height_mm}, opt)
      .value;
}

// Detected coils sorted nearest first, ties by (row, col).
std::vector<CoilIndex> select_active(const SimContext& ctx, const std::vector<CoilIndex>& detected,
                                     const Policy& p, double x, double y) {
  std::vector<std::pair<double, CoilIndex>> ranked;
  for (auto c : detected) ranked.push_back({distance_to(ctx, c, x, y), c});
  std::sort(ranked.begin(), ranked.end());
  std::vector<CoilIndex> out;
  for (std::size_t i = 0; i < ranked.size() && static_cast<int>(i) < p.k_max; ++i) out.push_back(ranked[i].second);
  return out;
}

std::vector<CoilIndex> detect_plain(const SimContext& ctx, const Policy& p, double x, double y) {
  std::vector<CoilIndex> out;
  if (!on_sheet(ctx, x, y)) return out;
  const double r = detect_radius(ctx, p);
  for (auto c : ctx.surviving)
    if (distance_to(ctx, c, x, y) <= r) out.push_back(c);
  return out;
}

PathPoint interpolate(const std::vector<PathPoint>& path, double t) {
  if (t <= path.front().t) return path.front();
  if (t >= path.back().t) return path.back();
  auto it = std::upper_bound(path.begin(), path.end(), t, [](double v, const PathPoint& q) { return v < q.t; });
  const PathPoint& b = *it;
  const PathPoint& a = *(it - 1);
  const double u = (t - a.t) / (b.t - a.t);
  return {t, a.x_mm + u * (b.x_mm - a.x_mm), a.y_mm + u * (b.y_mm - a.y_mm)};
}

template <bool Cached>
CoverageMap coverage_impl(const SimContext& ctx, const RxDevice& rx, const Policy& p, double step) {
  check_inputs(rx, p);
  if (!(step > 0.0) || !std::isfinite(step)) throw ValidationError("grid_step must be > 0");
  CoverageMap map;
  const double h = ctx.spec.side().mm() / 2.0;
  map.x0_mm = -h;
  map.y0_mm = -h;
  map.step_mm = step;
  map.nx = map.ny = static_cast<int>(std::floor(2.0 * h / step + 1e-9)) + 1;
  map.values.assign(static_cast<std::size_t>(map.nx) * map.ny, 0.0);

  // Active coil per sample, then offsets in micrometres.
  struct Sample {
    std::size_t cell;
    CoilIndex coil;
    std::int64_t dx, dy;
  };
  std::vector<Sample> samples;
  for (int iy = 0; iy < map.ny; ++iy)
    for (int ix = 0; ix < map.nx; ++ix) {
      const double x = map.x0_mm + ix * step, y = map.y0_mm + iy * step;
      for (auto c : select_active(ctx, detect_plain(ctx, p, x, y), p, x, y)) {
        const PointUm cc = coil_center(ctx.spec, c);
        samples.push_back({static_cast<std::size_t>(iy) * map.nx + ix, c, std::llround(x * 1000.0) - cc.x,
                           std::llround(y * 1000.0) - cc.y});
      }
    }

  std::vector<double> power(samples.size(), 0.0);
  if constexpr (Cached) {
    std::map<std::pair<std::int64_t, std::int64_t>, std::size_t> index;
    std::vector<std::pair<std::int64_t, std::int64_t>> offsets;
    for (const auto& s : samples)
      if (index.emplace(std::pair{s.dx, s.dy}, offsets.size()).second) offsets.push_back({s.dx, s.dy});
    std::vector<double> mutual(offsets.size());
    const auto n = static_cast<std::ptrdiff_t>(offsets.size());
    bool failed = false;
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      try {
        mutual[i] = mutual_at_offset(ctx, rx, offsets[i].first * 1e-3, offsets[i].second * 1e-3, false);
      } catch (...) {
#pragma omp atomic write
        failed = true;
      }
    }
    if (failed) throw DomainError("mutual inductance failed on the coverage grid");
    for (std::size_t i = 0; i < samples.size(); ++i)
      power[i] = power_from_mutual(ctx, rx, p, mutual[index.at({samples[i].dx, samples[i].dy})]);
  } else {
    for (std::size_t i = 0; i < samples.size(); ++i)
      power[i] = power_from_mutual(ctx, rx, p, mutual_at_offset(ctx, rx, samples[i].dx * 1e-3, samples[i].dy * 1e-3, false));
  }
  for (std::size_t i = 0; i < samples.size(); ++i)
    map.values[samples[i].cell] = std::max(map.values[samples[i].cell], power[i]);
  return map;
}

}  // namespace

double delivered_power(const SimContext& ctx, const RxDevice& rx, const Policy& p, CoilIndex tx, double x,
                       double y) {
  const PointUm c = coil_center(ctx.spec, tx);
  const std::int64_t dx = std::llround(x * 1000.0) - c.x;
  const std::int64_t dy = std::llround(y * 1000.0) - c.y;
  return power_from_mutual(ctx, rx, p, mutual_at_offset(ctx, rx, dx * 1e-3, dy * 1e-3, false));
}

StepState step_state(const SimContext& ctx, const RxDevice& rx, const Policy& p, double x, double y) {
  check_inputs(rx, p);
  if (!std::isfinite(x) || !std::isfinite(y)) throw ValidationError("non-finite RX position");
  StepState st;
  st.detected = detect_plain(ctx, p, x, y);
  st.active = select_active(ctx, st.detected, p, x, y);
  for (auto c : st.active) {
    st.power.push_back(delivered_power(ctx, rx, p, c, x, y));
    st.total_power += st.power.back();
  }
  return st;
}

SimTrace run_sim(const SimContext& ctx, const RxDevice& rx, const Policy& p, double dt) {
  check_inputs(rx, p);
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("dt must be > 0");
  if (rx.path.empty()) throw ValidationError("RX path is empty");
  for (std::size_t i = 0; i < rx.path.size(); ++i) {
    const auto& q = rx.path[i];
    if (!std::isfinite(q.t) || !std::isfinite(q.x_mm) || !std::isfinite(q.y_mm))
      throw ValidationError("RX path has non-finite values");
    if (i > 0 && !(q.t > rx.path[i - 1].t)) throw ValidationError("RX path times must be strictly increasing");
  }

  const double r_on = detect_radius(ctx, p);
  const double r_off = r_on * (1.0 + p.hysteresis);
  const double t0 = rx.path.front().t;
  const auto steps = static_cast<long>(std::floor((rx.path.back().t - t0) / dt + 1e-9));

  SimTrace trace;
  std::set<CoilIndex> detected;
  std::vector<CoilIndex> active;
  for (long i = 0; i <= steps; ++i) {
    const double t = t0 + static_cast<double>(i) * dt;
    const PathPoint pos = interpolate(rx.path, t);
    const bool inside = on_sheet(ctx, pos.x_mm, pos.y_mm);

    for (auto c : ctx.surviving) {
      const double d = distance_to(ctx, c, pos.x_mm, pos.y_mm);
      const bool was = detected.count(c) > 0;
      const bool now = inside && (was ? d <= r_off : d <= r_on);
      if (now && !was) {
        detected.insert(c);
        trace.events.push_back({t, EventKind::detect_on, c, d});
      } else if (!now && was) {
        detected.erase(c);
        trace.events.push_back({t, EventKind::detect_off, c, d});
      }
    }

    const auto next = select_active(ctx, {detected.begin(), detected.end()}, p, pos.x_mm, pos.y_mm);
    std::vector<CoilIndex> dropped;
    for (auto c : active)
      if (std::find(next.begin(), next.end(), c) == next.end()) dropped.push_back(c);
    std::sort(dropped.begin(), dropped.end());
    for (auto c : dropped) trace.events.push_back({t, EventKind::switch_off, c, 0.0});
    for (auto c : next)
      if (std::find(active.begin(), active.end(), c) == active.end())
        trace.events.push_back({t, EventKind::switch_on, c, 1.0});
    active = next;

    if (active.empty()) {
      trace.events.push_back({t, EventKind::power_sample, std::nullopt, 0.0});
    } else {
      for (auto c : active)
        trace.events.push_back({t, EventKind::power_sample, c, delivered_power(ctx, rx, p, c, pos.x_mm, pos.y_mm)});
    }
  }
  return trace;
}

CoverageMap coverage_map(const SimContext& ctx, const RxDevice& rx, const Policy& p, double step) {
  return coverage_impl<true>(ctx, rx, p, step);
}

CoverageMap coverage_map_serial(const SimContext& ctx, const RxDevice& rx, const Policy& p, double step) {
  return coverage_impl<false>(ctx, rx, p, step);
}

std::string to_ndjson(const SimTrace& trace) {
  std::string out;
  for (const auto& e : trace.events) {
    nlohmann::ordered_json j;
    j["t"] = e.t;
    j["kind"] = to_string(e.kind);
    j["coil"] = e.coil ? nlohmann::ordered_json::array({e.coil->row, e.coil->col}) : nlohmann::ordered_json(nullptr);
    j["value"] = e.value;
    out += j.dump();
    out += '\n';
  }
  return out;
}

}  // namespace wpt
