#ifndef RPLAB_GEODESIC_FLOW_HPP
#define RPLAB_GEODESIC_FLOW_HPP

///
/// \file geodesic_flow.hpp
///
/// Flow map, curvature, unstable Riccati solution and damping function.
///
/// Perturbed flows integrate Hamilton's equations of
///   H(w, xi) = 1/2 e^{-2 Phi(w)} |xi|^2,  Phi = psi + log(2 / (1 - |w|^2)),
/// in disk coordinates on the level H = 1/2 with the two-stage Gauss-Legendre
/// scheme, reducing to the fundamental polygon after every step.
///

#include <array>
#include <string>
#include <vector>

#include "rplab/flow_model.hpp"

namespace rplab
{

/// Position and covector in disk coordinates (xi = xi_x + i xi_y).
struct DiskState
{
    cplx w;
    cplx xi;
};

/// Gauss-Legendre nodes c = 1/2 -+ sqrt(3)/6.
inline constexpr std::array<double, 2> gauss_nodes{0.21132486540518711775, 0.78867513459481288225};

/// Curvature and bump value at the two Gauss nodes of one step, in node order.
struct StepNodes
{
    std::array<double, 2> curvature{};
    std::array<double, 2> bump{};
};

///
/// Incremental integrator for one orbit. Perturbed flows take signed steps of
/// size up to the model step h; the exact group flow accepts any step.
///
class FlowStepper
{
public:
    explicit FlowStepper(const FlowModel& model);

    void reset(const PhasePoint& p);

    /// Advance by a signed time dt.
    void step(double dt);

    PhasePoint point() const;
    cplx base() const;
    double angle() const;

    /// Current disk state (conformal path) or its equivalent (group path).
    DiskState disk_state() const;

    double curvature() const;
    double bump() const;
    double energy() const;

    const StepNodes& last_nodes() const
    {
        return nodes_;
    }

    ///
    /// Group element applied by reductions since reset(): the current state is
    /// `applied() * lift` where lift is the continuous orbit in the universal
    /// cover starting at the reset point.
    ///
    const Mat2& applied() const
    {
        return applied_;
    }

private:
    bool reduce_conformal(); // true if a pairing was applied

    const FlowModel* model_;
    bool exact_;
    Mat2 g_;
    DiskState s_{};
    Mat2 applied_ = Mat2::Identity();
    StepNodes nodes_{};
    // Stage slopes of the previous step, reused as the next initial guess.
    std::array<cplx, 4> stage_{};
    double stage_dt_ = 0.0;
};

/// Number of equal steps of size <= h used to cover |t|.
int steps_for(const FlowModel& model, double t);

///
/// phi_t(p). Constant curvature: right multiplication by diag(e^{t/2}, e^{-t/2})
/// followed by reduction; perturbed: symplectic integration.
///
PhasePoint flow_map(const FlowModel& model, const PhasePoint& p, double t);

/// Same with an explicit number of equal substeps.
PhasePoint flow_map_steps(const FlowModel& model, const PhasePoint& p, double t, int n_steps);

///
/// Flow in the universal cover: the continuous lift of phi_t starting at the
/// (unreduced) frame g.
///
Mat2 flow_lifted(const FlowModel& model, const Mat2& g, double t, int n_steps);

/// Integrate the conformal Hamiltonian flow even at epsilon = 0 (cross-checks).
PhasePoint flow_map_integrated(const FlowModel& model, const PhasePoint& p, double t);

/// Gaussian curvature K = e^{-2 psi} (-1 - Lap_hyp psi) at a polygon point.
double gaussian_curvature(const FlowModel& model, cplx w);

struct TrajectoryPoint
{
    cplx w;
    double theta = 0.0;
    double bump = 0.0;
    double curvature = 0.0;
};

/// Grid samples and node data of one integrated orbit segment.
struct Trajectory
{
    double step = 0.0; // signed step size
    std::vector<TrajectoryPoint> points;
    std::vector<StepNodes> nodes;
    PhasePoint end;
};

Trajectory integrate_trajectory(const FlowModel& model, const PhasePoint& p, double t, int n_steps);
Trajectory integrate_trajectory(const FlowModel& model, const PhasePoint& p, double t);

///
/// Scalar Riccati u' = -K(t) - u^2 advanced with the Gauss-Legendre scheme
/// using curvature at the step nodes. Also accumulates int u ds.
///
class RiccatiStepper
{
public:
    explicit RiccatiStepper(double u0) : u_(u0)
    {
    }

    /// nodes in increasing order of c along the integration direction.
    void step(double dt, double k_first, double k_second);

    double value() const
    {
        return u_;
    }
    double integral() const
    {
        return integral_;
    }

private:
    double u_;
    double integral_ = 0.0;
};

///
/// Solve the Riccati equation forward in time along a trajectory that was
/// integrated backward (traj.step < 0), from u = u_start at its far end.
/// Returns u at every grid point, in the trajectory's own order.
///
std::vector<double> riccati_forward_over_backward(const Trajectory& traj, double u_start);

/// Unstable Riccati solution u(p) > 0 (burn-in T_burn along the past of p).
double unstable_riccati(const FlowModel& model, const PhasePoint& p);

/// Stable Riccati solution u_s(p) < 0 (burn-in along the future of p).
double stable_riccati(const FlowModel& model, const PhasePoint& p);

/// log |D phi_t|_{E_u}(p)| = int_0^t u(phi_s p) ds, t >= 0.
double unstable_jacobian_log(const FlowModel& model, const PhasePoint& p, double t);

/// Unstable Riccati values along a forward orbit: u at each grid point of phi_s p, s in [0, t].
struct RiccatiOrbit
{
    Trajectory trajectory;
    std::vector<double> u;
    double integral = 0.0; // int_0^t u
};

RiccatiOrbit unstable_along_orbit(const FlowModel& model, const PhasePoint& p, double t);

/// D(p) = V(p) - u(p)/2.
double damping(const FlowModel& model, const PotentialSpec& v, const PhasePoint& p);

struct AnosovReport
{
    double lambda_estimate = 0.0;        // min over samples, unstable bundle
    double lambda_stable_estimate = 0.0; // min over samples, stable bundle (backward)
    double contact_residual = 0.0;       // max |alpha(X) - 1|
    double min_symplectic = 0.0;         // min normalised |d alpha| on ker alpha
    bool contact_ok = false;
    bool passed = false;
    std::string diagnostic;
};

AnosovReport verify_anosov(const FlowModel& model, std::size_t n_samples, double t_check,
                           std::uint64_t seed);

/// Contact data at a phase point: alpha(X) and normalised d alpha on ker alpha.
struct ContactCheck
{
    double alpha_x = 0.0;
    double symplectic = 0.0;
};

ContactCheck contact_check(const FlowModel& model, const PhasePoint& p);

/// Reverse the direction of a phase point (rotation by pi).
PhasePoint flip(const PhasePoint& p);

} // namespace rplab

#endif // RPLAB_GEODESIC_FLOW_HPP
