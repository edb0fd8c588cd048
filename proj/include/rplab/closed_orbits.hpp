#ifndef RPLAB_CLOSED_ORBITS_HPP
#define RPLAB_CLOSED_ORBITS_HPP

///
/// \file closed_orbits.hpp
///
/// Periodic orbits of the flow in the free homotopy class of a closed
/// hyperbolic geodesic, and Birkhoff integrals along them.
///
/// For perturbed metrics the orbit is found by multiple shooting in the
/// universal cover: frames g_0..g_{m-1} and period T with
///   phi_{T/m}(g_i) = g_{i+1},  phi_{T/m}(g_{m-1}) = gamma g_0,
/// solved by Newton's method with a finite-difference Jacobian; the phase
/// along the orbit is pinned by freezing the flow direction of g_0.
///

#include <vector>

#include "rplab/geodesic_flow.hpp"

namespace rplab
{

struct PeriodicOrbit
{
    Word word;
    Mat2 element;
    std::vector<Mat2> frames; // lifted frames at the segment starts
    int steps_per_segment = 0;
    double period = 0.0;
    double hyperbolic_length = 0.0;
    double residual = 0.0; // max closing defect, sl(2) coordinates
    int iterations = 0;
    bool converged = false;
};

struct ShootingOptions
{
    double tolerance = 1e-9;
    int max_iterations = 30;
};

PeriodicOrbit periodic_orbit(const FlowModel& model, const ClosedGeodesic& geodesic,
                             const ShootingOptions& options = {});

/// Integrals over one period: int u and int b (bump) along the orbit.
struct OrbitIntegrals
{
    double period = 0.0;
    double int_u = 0.0;
    double int_bump = 0.0;
    double u_start = 0.0; // periodic unstable Riccati solution at g_0
};

OrbitIntegrals orbit_integrals(const FlowModel& model, const PeriodicOrbit& orbit);

} // namespace rplab

#endif // RPLAB_CLOSED_ORBITS_HPP
