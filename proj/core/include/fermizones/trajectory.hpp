#pragma once

#include <string>
#include <vector>

#include "fermizones/geometry.hpp"

namespace fermizones {

struct TracerConfig {
  double arc_budget = 500.0;  // lattice units of arc length
  double w_max = 6.0;         // max strip width for OpenStable
  double l_min = 50.0;        // min extent along the fitted line for OpenStable

  // Embedded RK error tolerance per unit arc. Steps at h_min are accepted
  // regardless of the estimate: orbits then cross separatrix corners (whose
  // turning radius is far below h_min) along their current direction, which
  // regularizes tracing on near-critical planes.
  double rk_tol = 1e-9;
  double h_init = 1e-3;
  double h_max = 0.05;
  double h_min = 1e-5;

  double closure_tol = 1e-6;     // lattice-coordinate distance mod 1
  double tangent_align = 0.999;  // cos of tangent angle required at closure
  double min_closure_arc = 0.05;

  double stall_speed = 1e-7;     // |grad eps x B| below this counts as stalled
  double stall_patience = 1e-3;  // arc length of continuous stall tolerated

  double record_stride = 0.25;  // arc spacing of displacement samples
  bool keep_points = false;     // store the full polyline
  double project_tol = 0.05;    // max distance allowed for the initial projection

  // When > 0 the tracer stops early once the running line fit shows
  // extent > early_open_extent with width < w_max; used by carrier
  // extraction and sphere scans where open/compact is all that matters.
  double early_open_extent = 0.0;
};

enum class Termination { Closed, Budget, Stalled };

struct Trajectory {
  Vec3 start_cart;           // projected start, Cartesian covering space
  double epsilon_f = 0.0;
  double plane_offset = 0.0;  // c = B . q0
  double arc_length = 0.0;
  Termination termination = Termination::Budget;
  Vec3i period{0, 0, 0};  // closure translation in lattice units (Closed only)

  double max_energy_drift = 0.0;
  double max_plane_drift = 0.0;

  Vec3 start_tangent, end_tangent;
  Vec3 end_cart;

  std::vector<Vec3> points;  // Cartesian covering space (keep_points)
  struct Sample {
    double s;
    Vec3 displacement;  // q(s) - q0, Cartesian
  };
  std::vector<Sample> samples;

  std::size_t steps = 0;
};

enum class OrbitKind { Compact, OpenStable, Undetermined };

struct OrbitClass {
  OrbitKind kind = OrbitKind::Undetermined;
  Vec3 eta{0, 0, 0};    // unit direction in the plane orthogonal to B (OpenStable)
  double width = 0.0;   // perpendicular spread around the fitted line
  double extent = 0.0;  // spread along the fitted line
  std::string reason;   // budget | wandering | stalled (Undetermined)
};

}  // namespace fermizones
