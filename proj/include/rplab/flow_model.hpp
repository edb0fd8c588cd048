#ifndef RPLAB_FLOW_MODEL_HPP
#define RPLAB_FLOW_MODEL_HPP

///
/// \file flow_model.hpp
///
/// Geodesic flows on the unit tangent bundle M = T^1 S of a compact
/// hyperbolic surface S = Gamma \ H^2, either for the hyperbolic metric
/// itself (group model, M = Gamma \ SL(2,R)) or for a conformal perturbation
/// e^{2 psi} g_hyp with psi = epsilon * b and b a Gamma-invariant bump.
///

#include <memory>
#include <string>

#include "rplab/bump.hpp"
#include "rplab/config.hpp"
#include "rplab/fuchsian.hpp"

namespace rplab
{

enum class FlowKind
{
    ConstantCurvature,
    ConformalPerturbation,
};

std::string to_string(FlowKind kind);

///
/// A point of M. The matrix g is a frame of SL(2,R): base point g.i in the
/// half-plane, direction the image of the vertical unit vector. For the
/// perturbed metric the same frame encodes the base point and the direction;
/// the speed is fixed by the unit energy level.
///
struct PhasePoint
{
    Mat2 g = Mat2::Identity();

    /// Base point in the Poincare disk.
    cplx disk_point() const;

    /// Direction angle of the tangent vector in disk coordinates, in [0, 2 pi).
    double disk_angle() const;

    static PhasePoint from_disk(cplx w, double theta);
};

struct FlowModel
{
    FlowKind kind = FlowKind::ConstantCurvature;
    std::shared_ptr<const FuchsianGroup> group;
    PoincareBump bump;
    double epsilon = 0.0;
    double h = 1e-2;       // integrator step
    double t_burn = 20.0;  // Riccati burn-in time
    double horizon = 1e4;  // largest |t| accepted by the flow
    // Hyperbolic area of S weighted by e^{2 psi}.
    double surface_area = 0.0;
    // Upper bound of psi on the surface (rejection sampling of e^{2 psi}).
    double psi_max = 0.0;

    /// epsilon == 0: flow is exact right multiplication by diag(e^{t/2}, e^{-t/2}).
    bool exact_group() const
    {
        return epsilon == 0.0;
    }

    /// Liouville volume of M = 2 pi * area.
    double volume() const
    {
        return 2.0 * pi * surface_area;
    }

    /// psi at a disk point of the fundamental polygon.
    double psi(cplx w) const
    {
        return epsilon == 0.0 ? 0.0 : epsilon * bump.value(w);
    }
};

///
/// Potential V(x) = c0 + c1 psi(pi(x)) + c2 u(x) / 2. The c2 term makes V only
/// Holder continuous; c2 = 1 gives V = V0 and zero damping.
///
struct PotentialSpec
{
    double c0 = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;

    bool holder_term() const
    {
        return c2 != 0.0;
    }

    double operator()(double psi, double u) const
    {
        return c0 + c1 * psi + 0.5 * c2 * u;
    }

    static PotentialSpec from_config(const KeyValueConfig& cfg);
};

//
// Build and validate a flow model. Recognised keys (defaults in brackets):
//   kind [constant_curvature] | conformal_perturbation
//   group [bolza], epsilon [0], bump_width [0.4], bump_centre_x [0],
//   bump_centre_y [0], bump_depth [3], h [0.01], t_burn [20], horizon [10000],
//   verify_samples [64], verify_time [2]
// Throws InvalidModel / NotAnosov on violated invariants.
//
FlowModel build_model(const KeyValueConfig& cfg);

/// Build directly from a group (no Anosov verification).
FlowModel make_model(std::shared_ptr<const FuchsianGroup> group, FlowKind kind, double epsilon,
                     double bump_width = 0.4, cplx bump_centre = 0.0, int bump_depth = 3,
                     double h = 1e-2, double t_burn = 20.0);

/// Mobius action of an SL(2,R) element on the disk, with its complex derivative.
cplx disk_action(const Mat2& g, cplx w, cplx* derivative = nullptr);

/// Bring a disk point into the fundamental polygon; returns the applied element.
Mat2 reduce_disk_point(const FuchsianGroup& group, cplx& w);

/// Gamma-invariant psi at an arbitrary disk point.
double invariant_psi(const FlowModel& model, cplx w);

//
// Largest |psi(z) - psi(gamma z)| over n sampled points of the polygon and
// its boundary, for each generator gamma, using the raw series at both sides
// of each side pairing.
//
double invariance_residual(const FlowModel& model, std::size_t n_samples, std::uint64_t seed);

} // namespace rplab

#endif // RPLAB_FLOW_MODEL_HPP
