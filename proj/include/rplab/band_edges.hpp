#ifndef RPLAB_BAND_EDGES_HPP
#define RPLAB_BAND_EDGES_HPP

///
/// \file band_edges.hpp
///
/// Band edges gamma_k^- <= gamma_k^+ as extremes over an orbit ensemble of
/// finite-time averages of D - k u, extrapolated in the window length T
/// with a fitted a + b / T law.
///

#include <cstdint>
#include <string>
#include <vector>

#include "rplab/closed_orbits.hpp"
#include "rplab/geodesic_flow.hpp"
#include "rplab/liouville.hpp"

namespace rplab
{

struct SamplingPlan
{
    std::size_t n_orbits = 10000;     // Liouville-random seeds
    std::uint64_t seed = 1;
    std::vector<double> windows{50.0, 100.0, 200.0};
    bool closed_geodesics = true;     // also use periodic orbits of short words
    int max_word_length = 6;
    std::size_t max_closed = 64;
    double tolerance = 1e-3;          // accepted spread between the two largest windows
    int threads = 1;

    /// Throws InvalidConfig unless windows are increasing, at least two, and start after t_burn.
    void validate(double t_burn) const;

    static SamplingPlan from_config(const KeyValueConfig& cfg);
};

///
/// Per-orbit integrals of u and of the bump b over the windows [0, T_j] of a
/// forward orbit started after Riccati burn-in. Any potential and band index
/// can be evaluated from these without re-integrating.
///
struct OrbitEnsemble
{
    std::vector<double> windows;
    std::vector<std::vector<double>> int_u;    // [orbit][window]
    std::vector<std::vector<double>> int_bump; // [orbit][window]
    double epsilon = 0.0;
};

struct ClosedEnsemble
{
    std::vector<OrbitIntegrals> orbits;
    std::size_t attempted = 0;
    std::size_t failed = 0; // shooting did not converge; excluded
    double epsilon = 0.0;
};

OrbitEnsemble orbit_ensemble(const FlowModel& model, const SamplingPlan& plan);
ClosedEnsemble closed_ensemble(const FlowModel& model, const SamplingPlan& plan);

struct EdgePair
{
    double gamma_minus = 0.0;
    double gamma_plus = 0.0;
};

struct BandEdges
{
    int k = 0;
    double gamma_minus = 0.0;
    double gamma_plus = 0.0;
    double horizon = 0.0;              // largest window T
    std::size_t n_orbits = 0;
    double extrapolation_error = 0.0;  // spread between the two largest windows
    bool converged = true;
    EdgePair grid;                     // extrapolated Liouville-ensemble edges
    EdgePair closed;                   // closed-orbit edges (if any)
    std::size_t n_closed = 0;
    double min_average_u = 0.0;        // smallest orbit average of u (largest window)
};

///
/// Edges for band k and potential V. The reported edge is the more extreme
/// of the grid and closed-orbit estimates.
///
BandEdges band_edges(const OrbitEnsemble& grid, const ClosedEnsemble& closed, const PotentialSpec& v, int k,
                     double tolerance);

BandEdges band_edges(const FlowModel& model, const PotentialSpec& v, int k, const SamplingPlan& plan);

///
/// (1/t) int_0^t f(phi_{-s} p) ds by the trapezoidal rule on the integration grid.
///
double birkhoff_average(const FlowModel& model, const PhaseFunction& f, const PhasePoint& p, double t);

///
/// (1/t) int_0^t (D - k u)(phi_{-s} p) ds, with u from the Riccati equation
/// along the past of p (fourth-order node quadrature).
///
double birkhoff_damping(const FlowModel& model, const PotentialSpec& v, const PhasePoint& p, double t, int k = 0);

/// Least-squares fit y = a + b / T; returns a.
double extrapolate_inverse_t(const std::vector<double>& t, const std::vector<double>& y);

} // namespace rplab

#endif // RPLAB_BAND_EDGES_HPP
