// Carriers of open trajectories and their topological invariants.
//
// Given a triangulated Fermi surface and a field direction, every triangle is
// classified by tracing the orbit through its centroid. The carrier complex
// is the union of triangles whose orbits do not close up to a zero lattice
// translation; its boundary loops approximate separatrix orbits, get snapped
// into their planes orthogonal to B, and are filled with planar fans. Genus
// comes from the filled Euler characteristic, the homology class from signed
// crossing counts with the coordinate loops, and the zone label from the
// integer direction orthogonal to the measured open-orbit directions at the
// field and two perturbed fields.
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fermizones/surface.hpp"
#include "fermizones/tracer.hpp"

namespace fermizones {

struct ZoneLabel {
  enum class Kind { Trivial, Integer, Undetermined };
  Kind kind = Kind::Undetermined;
  Vec3i m{0, 0, 0};  // primitive, canonical sign, Kind::Integer only

  static ZoneLabel trivial() { return {Kind::Trivial, {0, 0, 0}}; }
  static ZoneLabel undetermined() { return {Kind::Undetermined, {0, 0, 0}}; }
  static ZoneLabel integer(const Vec3i& v) { return {Kind::Integer, canonical_sign(v)}; }

  bool operator==(const ZoneLabel& o) const { return kind == o.kind && m == o.m; }
  std::string to_string() const;
};

struct BoundaryLoop {
  std::vector<Vec3> points;   // lattice covering coordinates, snapped
  double plane_offset = 0.0;  // B . q of the snap plane (Cartesian)
  double max_plane_dev = 0.0; // residual after snapping
  bool contractible = true;   // net lattice offset around the loop is zero
  bool snapped_to_critical = false;
};

struct CarrierComponent {
  // Triangle soup in lattice covering coordinates (carrier triangles with
  // moved boundary vertices plus the disc fans), consistently oriented.
  struct Tri {
    Vec3 p[3];
  };
  std::vector<Tri> triangles;

  int vertex_count = 0, edge_count = 0, face_count = 0;  // before filling
  int n_loops = 0;
  int euler_filled = 0;
  int genus = -1;
  double area_fraction = 0.0;
  std::vector<BoundaryLoop> loops;
  Vec3i homology{0, 0, 0};  // set by homology_class
};

struct CarrierComplex {
  std::vector<CarrierComponent> components;
  bool empty() const { return components.empty(); }
  int open_triangles = 0;
  int compact_triangles = 0;
  int undetermined_triangles = 0;
  bool manifold_ok = true;       // odd filled chi or tangled boundary chaining
  std::string manifold_note;
};

struct CarrierOptions {
  TracerConfig tracer;  // budget for the per-centroid classification
  bool snap_boundaries = true;
  CarrierOptions() {
    tracer.arc_budget = 160.0;
    tracer.early_open_extent = 24.0;
    tracer.rk_tol = 1e-8;
  }
};

// Removes compact-orbit triangles and assembles the carrier components.
// All-compact surfaces give an empty complex (the trivial direction).
CarrierComplex extract_carriers(const FermiTriangulation& t, const DispersionRelation& d,
                                const MagneticField& field, const CarrierOptions& opt = {});

// Per-component genus; throws NumericalError("NonManifoldCarrier") when the
// sampling resolution was too coarse for a closed filled complex.
std::vector<int> genus_of_carriers(const CarrierComplex& c);

// Homology classes z_i from signed crossings of each filled component with
// the three coordinate loops at a random base point; deterministic given
// seed. Throws NumericalError("DegenerateBasePoint") after 10 retries.
std::vector<Vec3i> homology_class(CarrierComplex& c, std::uint64_t seed = 1);

// Critical points of the restriction (grad eps parallel to B on the level);
// their B.q values are the candidate separatrix planes.
struct RestrictionCritical {
  Vec3 point_lattice;
  double plane_offset;
};
std::vector<RestrictionCritical> restriction_critical_points(const DispersionRelation& d,
                                                             double epsilon_f, const Vec3& b,
                                                             int seed_density = 16);

struct LabelOptions {
  double delta_deg = 0.5;           // perturbation angle
  double fallback_delta_deg = 0.15; // retried when perturbed fields fail
  int n_seeds = 16;
  int height_bound = 12;
  double residual_tol = 1e-3;
  TracerConfig tracer;
  std::uint64_t seed = 1;
  LabelOptions() {
    tracer.arc_budget = 500.0;
    tracer.rk_tol = 1e-8;
  }
};

struct LabelResult {
  ZoneLabel label;
  double residual = -1.0;         // max |m_hat . eta_i| over measured directions
  double second_residual = -1.0;  // residual of the runner-up candidate
  std::vector<Vec3> etas;         // measured open-orbit directions (3 fields)
  std::string status;  // ok | trivial | no-open-orbit | rounding-failed | stalled-surface
  int open_count = 0, compact_count = 0, undetermined_count = 0;
  double delta_used_deg = 0.0;
};

// Measures the open-orbit direction at one field from stratified seeds.
struct DirectionMeasurement {
  bool found = false;
  Vec3 eta{0, 0, 0};
  double best_extent = 0.0;
  int open = 0, compact = 0, undetermined = 0;
};
DirectionMeasurement measure_orbit_direction(const DispersionRelation& d, double epsilon_f,
                                             const MagneticField& field,
                                             const std::vector<Vec3>& seeds,
                                             const TracerConfig& cfg);

// Zone label from orbit-direction asymptotics at B and two perturbed fields.
// `seeds` are surface points shared across the fields (stratified sampling).
LabelResult label_from_asymptotics(const DispersionRelation& d, double epsilon_f, const Vec3& b,
                                   const std::vector<Vec3>& seeds, const LabelOptions& opt = {});

// Convenience overload that triangulates to build its own seed set.
LabelResult label_from_asymptotics(const DispersionRelation& d, double epsilon_f, const Vec3& b,
                                   const LabelOptions& opt = {});

}  // namespace fermizones
