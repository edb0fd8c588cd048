#include "rplab/flow_model.hpp"

#include <random>

#include "rplab/error.hpp"
#include "rplab/geodesic_flow.hpp"
#include "rplab/liouville.hpp"

namespace rplab
{

std::string to_string(FlowKind kind)
{
    return kind == FlowKind::ConstantCurvature ? "constant_curvature" : "conformal_perturbation";
}

cplx PhasePoint::disk_point() const
{
    return to_disk(mobius(g, I));
}

double PhasePoint::disk_angle() const
{
    const cplx z = mobius(g, I);
    const cplx denom = g(1, 0) * I + g(1, 1);
    const cplx v_half = I / (denom * denom);
    const cplx v_disk = 2.0 * I / ((z + I) * (z + I)) * v_half;
    double theta = std::arg(v_disk);
    if (theta < 0)
    {
        theta += 2.0 * pi;
    }
    return theta;
}

PhasePoint PhasePoint::from_disk(cplx w, double theta)
{
    const cplx z = to_half_plane(w);
    const cplx jac = 2.0 * I / ((z + I) * (z + I));
    const double phi = theta - std::arg(jac);
    const double sy = std::sqrt(z.imag());
    Mat2 g0;
    g0 << sy, z.real() / sy, 0.0, 1.0 / sy;
    PhasePoint p;
    p.g = g0 * rotation(0.5 * (phi - 0.5 * pi));
    return p;
}

PotentialSpec PotentialSpec::from_config(const KeyValueConfig& cfg)
{
    PotentialSpec v;
    v.c0 = cfg.get_double("potential_c0", 0.0);
    v.c1 = cfg.get_double("potential_c1", 0.0);
    v.c2 = cfg.get_double("potential_c2", 0.0);
    return v;
}

cplx disk_action(const Mat2& g, cplx w, cplx* derivative)
{
    const cplx z = to_half_plane(w);
    const cplx denom = g(1, 0) * z + g(1, 1);
    const cplx gz = (g(0, 0) * z + g(0, 1)) / denom;
    if (derivative)
    {
        const cplx d_half = 2.0 * I / ((1.0 - w) * (1.0 - w));
        const cplx d_g = 1.0 / (denom * denom);
        const cplx d_disk = 2.0 * I / ((gz + I) * (gz + I));
        *derivative = d_disk * d_g * d_half;
    }
    return to_disk(gz);
}

Mat2 reduce_disk_point(const FuchsianGroup& group, cplx& w)
{
    Mat2 applied = Mat2::Identity();
    for (int count = 0;; ++count)
    {
        const int k = group.exit_side(w);
        if (k < 0)
        {
            return applied;
        }
        if (count > 64)
        {
            throw Error(ErrorKind::StepTooLarge, "disk point reduction did not terminate");
        }
        const Mat2& ginv = group.generator(group.inverse(k));
        w = disk_action(ginv, w);
        applied = ginv * applied;
    }
}

double invariant_psi(const FlowModel& model, cplx w)
{
    reduce_disk_point(*model.group, w);
    return model.psi(w);
}

double invariance_residual(const FlowModel& model, std::size_t n_samples, std::uint64_t seed)
{
    if (model.epsilon == 0.0)
    {
        return 0.0;
    }
    const FuchsianGroup& group = *model.group;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 2.0 * pi);
    double worst = 0.0;
    const double rho_max = 2.0 * group.circumradius();
    for (std::size_t i = 0; i < n_samples; ++i)
    {
        // Boundary point by bisection along a random ray.
        const cplx dir = std::polar(1.0, unif(rng));
        double lo = 0.0;
        double hi = rho_max;
        for (int it = 0; it < 100; ++it)
        {
            const double mid = 0.5 * (lo + hi);
            (group.contains(std::tanh(0.5 * mid) * dir, 0.0) ? lo : hi) = mid;
        }
        const cplx wb = std::tanh(0.5 * lo) * dir;
        // Side through wb: the generator whose bisector is (nearly) active.
        int side = 0;
        double best = -1e300;
        for (std::size_t k = 0; k < group.size(); ++k)
        {
            const cplx c = group.neighbour_centre(static_cast<int>(k));
            const double gain = std::norm(wb) - std::norm(wb - c) / (1.0 - std::norm(c));
            if (gain > best)
            {
                best = gain;
                side = static_cast<int>(k);
            }
        }
        const cplx paired = disk_action(group.generator(group.inverse(side)), wb);
        worst = std::max(worst, std::abs(model.psi(wb) - model.psi(paired)));

        // Interior point against every generator image.
        cplx w = std::tanh(0.5 * lo * std::uniform_real_distribution<double>(0.0, 1.0)(rng)) * dir;
        const double base = invariant_psi(model, w);
        for (std::size_t k = 0; k < group.size(); ++k)
        {
            const cplx gw = disk_action(group.generator(static_cast<int>(k)), w);
            worst = std::max(worst, std::abs(base - invariant_psi(model, gw)));
        }
    }
    return worst;
}

FlowModel make_model(std::shared_ptr<const FuchsianGroup> group, FlowKind kind, double epsilon,
                     double bump_width, cplx bump_centre, int bump_depth, double h, double t_burn)
{
    if (!(h > 0.0) || h > 0.5)
    {
        throw Error(ErrorKind::InvalidConfig, "integrator step h must lie in (0, 0.5]");
    }
    if (!(t_burn > 0.0))
    {
        throw Error(ErrorKind::InvalidConfig, "t_burn must be positive");
    }
    if (!(epsilon >= 0.0))
    {
        throw Error(ErrorKind::InvalidConfig, "epsilon must be non-negative");
    }
    if (kind == FlowKind::ConstantCurvature && epsilon != 0.0)
    {
        throw Error(ErrorKind::InvalidConfig, "constant_curvature requires epsilon = 0");
    }
    FlowModel m;
    m.kind = kind;
    m.group = std::move(group);
    m.bump = PoincareBump(*m.group, bump_centre, bump_width, bump_depth);
    m.epsilon = epsilon;
    m.h = h;
    m.t_burn = t_burn;
    m.surface_area = m.group->area();
    if (epsilon != 0.0)
    {
        // Grid scan of the polygon's bounding disk, padded for safety.
        const double r = std::tanh(0.5 * m.group->circumradius());
        double bmax = 0.0;
        for (int i = -200; i <= 200; ++i)
        {
            for (int j = -200; j <= 200; ++j)
            {
                const cplx w(r * i / 200.0, r * j / 200.0);
                if (m.group->contains(w))
                {
                    bmax = std::max(bmax, m.bump.value(w));
                }
            }
        }
        m.psi_max = epsilon * bmax * 1.05 + 1e-12;
        m.surface_area = conformal_area(m, 200000, 0x5eedULL);
    }
    return m;
}

FlowModel build_model(const KeyValueConfig& cfg)
{
    const std::string kind_name = cfg.get_string("kind", "constant_curvature");
    FlowKind kind;
    if (kind_name == "constant_curvature")
    {
        kind = FlowKind::ConstantCurvature;
    }
    else if (kind_name == "conformal_perturbation")
    {
        kind = FlowKind::ConformalPerturbation;
    }
    else
    {
        throw Error(ErrorKind::InvalidConfig, "unknown kind: " + kind_name);
    }
    const std::string group_name = cfg.get_string("group", "bolza");
    if (group_name != "bolza")
    {
        throw Error(ErrorKind::InvalidConfig, "unknown group preset: " + group_name);
    }
    static const auto bolza = std::make_shared<const FuchsianGroup>(FuchsianGroup::bolza());
    if (bolza->determinant_residual() > 1e-12)
    {
        throw Error(ErrorKind::InvalidModel, "generator determinant differs from 1");
    }

    const double eps = kind == FlowKind::ConstantCurvature ? 0.0 : cfg.get_double("epsilon", 0.0);
    FlowModel m = make_model(bolza, kind, eps, cfg.get_double("bump_width", 0.4),
                             cplx(cfg.get_double("bump_centre_x", 0.0), cfg.get_double("bump_centre_y", 0.0)),
                             static_cast<int>(cfg.get_int("bump_depth", 3)), cfg.get_double("h", 1e-2),
                             cfg.get_double("t_burn", 20.0));
    m.horizon = cfg.get_double("horizon", 1e4);
    if (!(m.horizon > 0.0))
    {
        throw Error(ErrorKind::InvalidConfig, "horizon must be positive");
    }

    const double residual = invariance_residual(m, 1000, 0x1a2b3cULL);
    if (residual > 1e-8)
    {
        throw Error(ErrorKind::InvalidModel,
                    "psi is not Gamma-invariant (residual " + std::to_string(residual) + ")");
    }

    const auto n_verify = static_cast<std::size_t>(cfg.get_int("verify_samples", 64));
    if (n_verify > 0)
    {
        const AnosovReport rep = verify_anosov(m, n_verify, cfg.get_double("verify_time", 2.0), 0x7e57ULL);
        if (!rep.passed)
        {
            throw Error(ErrorKind::NotAnosov, "Anosov verification failed: " + rep.diagnostic);
        }
    }
    return m;
}

} // namespace rplab
