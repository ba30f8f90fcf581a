#include "fermizones/tracer.hpp"

#include <algorithm>
#include <cmath>

#include "fermizones/errors.hpp"

namespace fermizones {

namespace {

// Dormand-Prince 5(4) coefficients.
constexpr double kA21 = 1.0 / 5;
constexpr double kA31 = 3.0 / 40, kA32 = 9.0 / 40;
constexpr double kA41 = 44.0 / 45, kA42 = -56.0 / 15, kA43 = 32.0 / 9;
constexpr double kA51 = 19372.0 / 6561, kA52 = -25360.0 / 2187, kA53 = 64448.0 / 6561,
                 kA54 = -212.0 / 729;
constexpr double kA61 = 9017.0 / 3168, kA62 = -355.0 / 33, kA63 = 46732.0 / 5247,
                 kA64 = 49.0 / 176, kA65 = -5103.0 / 18656;
constexpr double kB1 = 35.0 / 384, kB3 = 500.0 / 1113, kB4 = 125.0 / 192, kB5 = -2187.0 / 6784,
                 kB6 = 11.0 / 84;
// b - bhat (error estimator weights), k7 = f(y5).
constexpr double kE1 = 71.0 / 57600, kE3 = -71.0 / 16695, kE4 = 71.0 / 1920,
                 kE5 = -17253.0 / 339200, kE6 = 22.0 / 525, kE7 = -1.0 / 40;

struct FlowField {
  const DispersionRelation& d;
  const ReciprocalLattice& lat;
  bool identity;
  Vec3 b_hat;

  // value + Cartesian gradient of epsilon at Cartesian covering point q
  void eval(const Vec3& q, double& value, Vec3& grad_cart) const {
    Vec3 p = identity ? q : lat.to_lattice(q);
    Vec3 gl;
    d.value_and_gradient(p, value, gl);
    grad_cart = identity ? gl : lat.gradient_to_cartesian(gl);
  }

  // unit tangent of the orbit; speed = |grad x B|
  Vec3 tangent(const Vec3& q, double& speed) const {
    double v;
    Vec3 g;
    eval(q, v, g);
    Vec3 w = cross(g, b_hat);
    speed = norm(w);
    if (speed < 1e-300) return {0, 0, 0};
    return w / speed;
  }
};

struct LineFit {
  bool valid = false;
  Vec2 dir{1, 0};
  double width = 0, extent = 0;
  Vec2 first, last;
};

LineFit fit_line(const std::vector<Trajectory::Sample>& samples, double s_from,
                 const PlaneFrame& frame) {
  LineFit fit;
  double sx = 0, sy = 0;
  std::size_t n = 0;
  for (const auto& smp : samples) {
    if (smp.s < s_from) continue;
    Vec2 r = frame.project(smp.displacement);
    sx += r.x;
    sy += r.y;
    ++n;
  }
  if (n < 4) return fit;
  Vec2 mean{sx / n, sy / n};
  double cxx = 0, cxy = 0, cyy = 0;
  for (const auto& smp : samples) {
    if (smp.s < s_from) continue;
    Vec2 r = frame.project(smp.displacement) - mean;
    cxx += r.x * r.x;
    cxy += r.x * r.y;
    cyy += r.y * r.y;
  }
  SymEigen2 eig = sym_eigen2(cxx, cxy, cyy);
  Vec2 dir = eig.vec_max;
  double lo_a = 1e300, hi_a = -1e300, lo_w = 1e300, hi_w = -1e300;
  bool have_first = false;
  Vec2 first{}, last{};
  for (const auto& smp : samples) {
    if (smp.s < s_from) continue;
    Vec2 r = frame.project(smp.displacement);
    if (!have_first) {
      first = r;
      have_first = true;
    }
    last = r;
    double a = dot(r - mean, dir);
    double w = cross2(dir, r - mean);
    lo_a = std::min(lo_a, a);
    hi_a = std::max(hi_a, a);
    lo_w = std::min(lo_w, w);
    hi_w = std::max(hi_w, w);
  }
  if (dot(last - first, dir) < 0) dir = dir * -1.0;
  fit.valid = true;
  fit.dir = dir;
  fit.extent = hi_a - lo_a;
  fit.width = hi_w - lo_w;
  fit.first = first;
  fit.last = last;
  return fit;
}

// Newton pull-back onto {eps = eF} intersected with {B.q = c}. Returns false
// near a critical configuration (grad parallel to B). On success the final
// evaluation is handed back so the stepper can reuse it as the next tangent.
bool project_to_leaf(const FlowField& ff, double ef, double c, Vec3& q, double& value_out,
                     Vec3& grad_out) {
  for (int it = 0; it < 4; ++it) {
    double v;
    Vec3 g;
    ff.eval(q, v, g);
    double f1 = v - ef;
    double f2 = dot(ff.b_hat, q) - c;
    if (std::abs(f1) < 1e-12 && std::abs(f2) < 1e-12) {
      value_out = v;
      grad_out = g;
      return true;
    }
    double gg = dot(g, g);
    double gb = dot(g, ff.b_hat);
    double det = gg - gb * gb;  // |g x B|^2
    if (det < 1e-24) return false;
    double alpha = (f1 - f2 * gb) / det;
    double beta = (gg * f2 - gb * f1) / det;
    q -= g * alpha + ff.b_hat * beta;
  }
  double v;
  Vec3 g;
  ff.eval(q, v, g);
  value_out = v;
  grad_out = g;
  return std::abs(v - ef) < 1e-9 && std::abs(dot(ff.b_hat, q) - c) < 1e-9;
}

}  // namespace

Vec3 hamiltonian_vector_field(const DispersionRelation& d, const Vec3& b_direction,
                              const Vec3& p_lattice) {
  return cross(d.gradient_cartesian(p_lattice), b_direction);
}

Trajectory trace(const DispersionRelation& d, double epsilon_f, const MagneticField& field,
                 const Vec3& p0_lattice, const TracerConfig& cfg) {
  const ReciprocalLattice& lat = d.lattice();
  FlowField ff{d, lat, lat.is_identity(), field.direction};

  // Project the seed onto the energy level along the gradient.
  Vec3 q = ff.identity ? p0_lattice : lat.to_cartesian(p0_lattice);
  Vec3 q_seed = q;
  bool on_surface = false;
  for (int it = 0; it < 60; ++it) {
    double v;
    Vec3 g;
    ff.eval(q, v, g);
    double f = v - epsilon_f;
    if (std::abs(f) < 1e-12) {
      on_surface = true;
      break;
    }
    double g2 = dot(g, g);
    if (g2 < 1e-24) break;
    q -= g * (f / g2);
  }
  if (!on_surface || dist(q, q_seed) > cfg.project_tol)
    throw NumericalError("orbit-tracer: StartNotOnSurface: seed projection failed");

  Trajectory tr;
  tr.epsilon_f = epsilon_f;
  tr.start_cart = q;
  tr.plane_offset = dot(field.direction, q);
  const double c = tr.plane_offset;

  Vec3 p0_lat = ff.identity ? q : lat.to_lattice(q);
  Vec3 p_prev_lat = p0_lat;

  // Orientation sign of the traversal. Ballistic saddle passages land on a
  // branch where the Hamiltonian flow runs the other way; the sign flips so
  // that the tracer keeps following the level curve in its direction of
  // motion (the separatrix-crossing regularization).
  double orient = 1.0;
  auto fdir = [&](const Vec3& qq, double& sp) { return ff.tangent(qq, sp) * orient; };

  double speed;
  Vec3 k1 = fdir(q, speed);
  tr.start_tangent = k1;
  tr.end_tangent = k1;
  tr.end_cart = q;
  tr.samples.push_back({0.0, {0, 0, 0}});
  if (cfg.keep_points) tr.points.push_back(q);

  PlaneFrame frame = plane_frame(field.direction);

  double s = 0.0;
  double h = cfg.h_init;
  double stall_arc = 0.0;
  double next_record = cfg.record_stride;
  double next_early_check = std::max(10.0, 4 * cfg.record_stride);
  tr.termination = Termination::Budget;

  if (speed < cfg.stall_speed) {
    tr.termination = Termination::Stalled;
    return tr;
  }

  while (s < cfg.arc_budget) {
    double h_eff = std::min({h, cfg.h_max, cfg.arc_budget - s});
    if (h_eff < cfg.h_min) break;

    double sp;
    Vec3 k2 = fdir(q + k1 * (kA21 * h_eff), sp);
    Vec3 k3 = fdir(q + (k1 * kA31 + k2 * kA32) * h_eff, sp);
    Vec3 k4 = fdir(q + (k1 * kA41 + k2 * kA42 + k3 * kA43) * h_eff, sp);
    Vec3 k5 = fdir(q + (k1 * kA51 + k2 * kA52 + k3 * kA53 + k4 * kA54) * h_eff, sp);
    Vec3 k6 = fdir(q + (k1 * kA61 + k2 * kA62 + k3 * kA63 + k4 * kA64 + k5 * kA65) * h_eff, sp);
    Vec3 y5 = q + (k1 * kB1 + k3 * kB3 + k4 * kB4 + k5 * kB5 + k6 * kB6) * h_eff;
    Vec3 k7 = fdir(y5, sp);
    Vec3 err_vec = (k1 * kE1 + k3 * kE3 + k4 * kE4 + k5 * kE5 + k6 * kE6 + k7 * kE7) * h_eff;
    double err = norm(err_vec);

    double tol_step = cfg.rk_tol * h_eff;
    bool ballistic = false;
    if (err > tol_step) {
      if (h_eff > cfg.h_min * 1.0001) {
        double shrink = 0.9 * std::pow(tol_step / (err + 1e-300), 0.2);
        h = std::max(cfg.h_min, h_eff * std::clamp(shrink, 0.1, 0.9));
        continue;
      }
      // The controller wants steps below h_min: the orbit is at a separatrix
      // corner whose turning radius is under the step floor. Jump straight
      // along the current tangent across the corner region and re-project;
      // this resolves the passage deterministically in the direction of
      // motion instead of leaving it to float noise at the corner scale.
      y5 = q + k1 * (2 * h_eff);
      ballistic = true;
    }

    const double step_arc = ballistic ? 2 * h_eff : h_eff;
    Vec3 q_new = y5;
    double v_new;
    Vec3 g_new;
    if (!project_to_leaf(ff, epsilon_f, c, q_new, v_new, g_new)) {
      tr.termination = Termination::Stalled;
      break;
    }
    Vec3 w = cross(g_new, ff.b_hat);
    double speed_new = norm(w);
    Vec3 k1_new = speed_new > 1e-300 ? w * (orient / speed_new) : Vec3{0, 0, 0};
    if (ballistic && dot(k1_new, k1) < 0) {
      orient = -orient;
      k1_new = -k1_new;
    }

    tr.max_energy_drift = std::max(tr.max_energy_drift, std::abs(v_new - epsilon_f));
    tr.max_plane_drift = std::max(tr.max_plane_drift, std::abs(dot(ff.b_hat, q_new) - c));

    Vec3 p_new_lat = ff.identity ? q_new : lat.to_lattice(q_new);

    // Closure detection via the Poincare section through the start point with
    // normal start_tangent. Raw polyline chords bow inward from the orbit by
    // the step sagitta, so a candidate crossing is first interpolated on the
    // section and then projected back onto the leaf curve before the
    // transverse distance is compared with closure_tol.
    if (s + step_arc > cfg.min_closure_arc) {
      Vec3 d1 = p_prev_lat - p0_lat;
      Vec3i rnd{static_cast<std::int64_t>(std::llround(d1.x)),
                static_cast<std::int64_t>(std::llround(d1.y)),
                static_cast<std::int64_t>(std::llround(d1.z))};
      Vec3 q0_img =
          tr.start_cart + (ff.identity ? to_vec3(rnd) : lat.to_cartesian(to_vec3(rnd)));
      Vec3 r1 = q - q0_img;
      Vec3 r2 = q_new - q0_img;
      double f1 = dot(r1, tr.start_tangent);
      double f2 = dot(r2, tr.start_tangent);
      bool near = std::min(norm(r1), norm(r2)) < 0.05;
      if (near && f1 < 0 && f2 >= 0 && dot(k1_new, tr.start_tangent) > cfg.tangent_align) {
        double tcross = f1 / (f1 - f2);
        Vec3 xstar = q + (q_new - q) * tcross;
        double v_c;
        Vec3 g_c;
        if (project_to_leaf(ff, epsilon_f, c, xstar, v_c, g_c)) {
          // Transverse separation in lattice coordinates.
          Vec3 rr_lat = (ff.identity ? xstar : lat.to_lattice(xstar)) - (p0_lat + to_vec3(rnd));
          Vec3 t_lat = ff.identity ? tr.start_tangent
                                   : normalized(lat.to_lattice(tr.start_tangent));
          Vec3 perp = rr_lat - t_lat * dot(rr_lat, t_lat);
          if (norm(perp) < cfg.closure_tol) {
            tr.termination = Termination::Closed;
            tr.period = rnd;
            s += step_arc * tcross;
            tr.steps++;
            tr.end_cart = xstar;
            tr.end_tangent = k1_new;
            if (cfg.keep_points) tr.points.push_back(xstar);
            tr.samples.push_back({s, xstar - tr.start_cart});
            break;
          }
        }
      }
    }

    s += step_arc;
    tr.steps++;
    q = q_new;
    k1 = k1_new;
    p_prev_lat = p_new_lat;
    tr.end_cart = q_new;
    tr.end_tangent = k1_new;

    if (speed_new < cfg.stall_speed) {
      stall_arc += step_arc;
      if (stall_arc > cfg.stall_patience) {
        tr.termination = Termination::Stalled;
        break;
      }
    } else {
      stall_arc = 0.0;
    }

    if (s >= next_record) {
      tr.samples.push_back({s, q - tr.start_cart});
      next_record += cfg.record_stride;
    }
    if (cfg.keep_points) tr.points.push_back(q);

    if (cfg.early_open_extent > 0 && s >= next_early_check) {
      next_early_check = s * 1.5;
      LineFit fit = fit_line(tr.samples, 0.2 * s, frame);
      if (fit.valid && fit.extent > cfg.early_open_extent && fit.width < cfg.w_max) break;
    }

    if (ballistic) {
      h = 8 * cfg.h_min;
    } else {
      double grow = 0.9 * std::pow(tol_step / (err + 1e-300), 0.2);
      h = std::max(cfg.h_min, h_eff * std::clamp(grow, 0.2, 5.0));
    }
  }

  tr.arc_length = s;
  return tr;
}

OrbitClass classify(const Trajectory& t, const MagneticField& field, const TracerConfig& cfg,
                    const ReciprocalLattice& lattice) {
  OrbitClass oc;
  PlaneFrame frame = plane_frame(field.direction);

  if (t.termination == Termination::Closed) {
    if (t.period[0] == 0 && t.period[1] == 0 && t.period[2] == 0) {
      oc.kind = OrbitKind::Compact;
      return oc;
    }
    // Closed up to a lattice translation: exactly periodic open orbit.
    Vec3 shift = lattice.to_cartesian(to_vec3(t.period));
    Vec3 eta = shift - field.direction * dot(field.direction, shift);
    oc.kind = OrbitKind::OpenStable;
    oc.eta = normalized(eta);
    LineFit fit = fit_line(t.samples, 0.0, frame);
    if (fit.valid) {
      oc.width = fit.width;
      oc.extent = fit.extent;
    }
    return oc;
  }

  if (t.termination == Termination::Stalled) {
    oc.kind = OrbitKind::Undetermined;
    oc.reason = "stalled";
    return oc;
  }

  LineFit fit = fit_line(t.samples, 0.2 * t.arc_length, frame);
  if (!fit.valid) {
    oc.kind = OrbitKind::Undetermined;
    oc.reason = "budget";
    return oc;
  }
  oc.width = fit.width;
  oc.extent = fit.extent;
  if (fit.width < cfg.w_max && fit.extent > cfg.l_min) {
    oc.kind = OrbitKind::OpenStable;
    oc.eta = frame.lift(fit.dir);
    return oc;
  }
  oc.kind = OrbitKind::Undetermined;
  oc.reason = fit.width >= cfg.w_max ? "wandering" : "budget";
  return oc;
}

}  // namespace fermizones
