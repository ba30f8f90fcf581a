// Hamiltonian orbit tracing on the Fermi surface.
//
// The flow is dq/ds = unit(grad eps x B) in Cartesian covering coordinates,
// arc-length parametrized, integrated with an embedded Dormand-Prince 5(4)
// pair; every accepted step is pulled back onto the two-constraint set
// {eps = eF} and {B . q = c} by Newton iterations, which keeps both drifts at
// projection-noise level.
#pragma once

#include "fermizones/magnetic.hpp"
#include "fermizones/surface.hpp"
#include "fermizones/trajectory.hpp"

namespace fermizones {

// v = grad_q eps x B at lattice point p; lattice-frame gradients are mapped
// through the basis before the cross product.
Vec3 hamiltonian_vector_field(const DispersionRelation& d, const Vec3& b_direction,
                              const Vec3& p_lattice);

// Traces from p0 (lattice coordinates, projected onto the level first).
// Throws NumericalError("StartNotOnSurface") when the projection fails or
// moves farther than cfg.project_tol.
Trajectory trace(const DispersionRelation& d, double epsilon_f, const MagneticField& field,
                 const Vec3& p0_lattice, const TracerConfig& cfg = {});

OrbitClass classify(const Trajectory& t, const MagneticField& field, const TracerConfig& cfg,
                    const ReciprocalLattice& lattice = {});

}  // namespace fermizones
