#include "wpt/em_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace wpt {

using constants::eps0;
using constants::mu0;
using constants::pi;

double skin_depth(const MaterialDb& m, double frequency) {
  if (!(frequency > 0.0)) throw ValidationError("frequency must be > 0");
  const double rho = m.lm_resistivity * 1e-3;  // ohm*mm -> ohm*m
  return std::sqrt(rho / (pi * frequency * mu0));
}

CoilResistance coil_resistance(const CoilSpec& coil, const MaterialDb& m, double frequency) {
  const double w = coil.xsec.width.mm();
  const double t = coil.xsec.thickness.mm();
  if (!(w > 0.0 && t > 0.0)) throw ValidationError("channel cross-section has zero area");
  const double length = coil_conductor_length(coil).mm();
  const double delta = skin_depth(m, frequency) * 1e3;  // mm

  CoilResistance r;
  r.r_dc = m.lm_resistivity * length / (w * t);
  if (2.0 * delta >= std::min(w, t)) {
    r.r_ac = r.r_dc;
  } else {
    const double core = std::max(0.0, w - 2.0 * delta) * std::max(0.0, t - 2.0 * delta);
    r.r_ac = m.lm_resistivity * length / (w * t - core);
  }
  return r;
}

double coil_inductance(const CoilSpec& coil) {
  coil_conductor_length(coil);  // validates geometry
  const double d_out = coil_turn_side(coil, 0).meters();
  const double d_in = coil_turn_side(coil, coil.turns - 1).meters();
  if (!(d_in > 0.0)) throw ValidationError("degenerate spiral: innermost turn has no extent");
  const double n = coil.turns;
  const double d_avg = 0.5 * (d_out + d_in);
  const double fill = (d_out - d_in) / (d_out + d_in);
  return 2.34 * mu0 * n * n * d_avg / (1.0 + 2.75 * fill);
}

double stray_capacitance(const CoilSpec& coil, const MaterialDb& m) {
  coil_conductor_length(coil);
  const double t = coil.xsec.thickness.meters();
  const double s = coil.xsec.spacing.meters();
  double c = 0.0;
  for (int i = 0; i + 1 < coil.turns; ++i) {
    const double mean_perimeter =
        0.5 * (4.0 * coil_turn_side(coil, i).meters() + 4.0 * coil_turn_side(coil, i + 1).meters());
    c += eps0 * m.pva_relative_permittivity * t * mean_perimeter / s;
  }
  return c;
}

double self_resonance(double inductance, double capacitance) {
  if (capacitance <= 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / (2.0 * pi * std::sqrt(inductance * capacitance));
}

ElectricalReport q_factor(const CoilSpec& coil, const MaterialDb& m, double frequency,
                          const Calibration& cal) {
  ElectricalReport rep;
  const auto r = coil_resistance(coil, m, frequency);
  rep.r_dc = r.r_dc;
  rep.r_ac = r.r_ac;
  rep.skin_depth = skin_depth(m, frequency);
  rep.inductance = coil_inductance(coil);
  rep.stray_capacitance = stray_capacitance(coil, m);
  rep.f_self_resonance = self_resonance(rep.inductance, rep.stray_capacitance);
  rep.loss_calibration = cal.loss_calibration;
  if (frequency >= rep.f_self_resonance)
    throw DomainError("operating above self-resonance (f = " + std::to_string(frequency) +
                      " Hz, f_sr = " + std::to_string(rep.f_self_resonance) + " Hz)");
  const double w = 2.0 * pi * frequency;
  const double wl = w * rep.inductance;
  rep.r_dielectric = cal.tan_delta_eff * w * wl * wl * rep.stray_capacitance;
  rep.q_factor = wl / (cal.loss_calibration * (rep.r_ac + rep.r_dielectric));
  return rep;
}

std::vector<kernels::Filament> coil_filaments(const CoilSpec& coil, const CoilPose& pose) {
  const auto pts = spiral_centerline(coil, {0, 0});
  std::vector<kernels::Filament> fs;
  fs.reserve(pts.size());
  const double z = pose.z_mm * 1e-3;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    kernels::Filament f;
    f.a = {pose.x_mm * 1e-3 + pts[i].x * 1e-6, pose.y_mm * 1e-3 + pts[i].y * 1e-6, z};
    f.b = {pose.x_mm * 1e-3 + pts[i + 1].x * 1e-6, pose.y_mm * 1e-3 + pts[i + 1].y * 1e-6, z};
    fs.push_back(f);
  }
  return fs;
}

MutualResult mutual_inductance(const CoilSpec& coil_a, const CoilPose& a, const CoilSpec& coil_b,
                               const CoilPose& b, const MutualOptions& opt) {
  const auto fa = coil_filaments(coil_a, a);
  const auto fb = coil_filaments(coil_b, b);
  const auto sum = [&](int pieces) {
    const auto sa = kernels::subdivide(fa, pieces);
    const auto sb = kernels::subdivide(fb, pieces);
    return opt.parallel ? kernels::neumann_sum_parallel(sa, sb) : kernels::neumann_sum_serial(sa, sb);
  };

  MutualResult res;
  int pieces = std::max(1, opt.initial_pieces_per_side);
  double prev = sum(pieces);
  for (int k = 0; k < opt.max_refinements; ++k) {
    pieces *= 2;
    const double cur = sum(pieces);
    const double change = cur == 0.0 ? std::abs(cur - prev) : std::abs(cur - prev) / std::abs(cur);
    res = {cur, pieces, change};
    if (change < opt.tolerance) return res;
    prev = cur;
  }
  throw DomainError("mutual inductance did not converge within " + std::to_string(opt.max_refinements) +
                    " refinements");
}

double link_efficiency(double q_tx, double q_rx, double k) {
  const double x = k * k * q_tx * q_rx;
  const double den = 1.0 + std::sqrt(1.0 + x);
  return x / (den * den);
}

CouplingReport coupling(const CoilSpec& tx, const CoilPose& tx_pose, double q_tx, const CoilSpec& rx,
                        const CoilPose& rx_pose, double q_rx, const MutualOptions& opt) {
  CouplingReport rep;
  rep.mutual = mutual_inductance(tx, tx_pose, rx, rx_pose, opt).value;
  rep.k_coupling = std::abs(rep.mutual) / std::sqrt(coil_inductance(tx) * coil_inductance(rx));
  if (!(rep.k_coupling < 1.0))
    throw DomainError("coupling coefficient " + std::to_string(rep.k_coupling) +
                      " is not below 1; coils too close for the filament model");
  rep.link_efficiency = link_efficiency(q_tx, q_rx, rep.k_coupling);
  return rep;
}

}  // namespace wpt
