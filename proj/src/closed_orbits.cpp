#include "rplab/closed_orbits.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "rplab/error.hpp"

namespace rplab
{

namespace
{

// Lifted flow over one segment, optionally recording node data.
Mat2 segment(const FlowModel& model, const Mat2& g, double t, int n, std::vector<StepNodes>* nodes)
{
    FlowStepper st(model);
    st.reset(PhasePoint{g});
    const double dt = t / n;
    for (int i = 0; i < n; ++i)
    {
        st.step(dt);
        if (nodes)
        {
            nodes->push_back(st.last_nodes());
        }
    }
    return sl2_inverse(st.applied()) * st.point().g;
}

Eigen::Vector3d defect(const Mat2& target, const Mat2& end)
{
    return sl2_coords(sl2_inverse(target) * end);
}

} // namespace

PeriodicOrbit periodic_orbit(const FlowModel& model, const ClosedGeodesic& geodesic,
                             const ShootingOptions& options)
{
    PeriodicOrbit orb;
    orb.word = geodesic.word;
    orb.element = geodesic.element;
    orb.hyperbolic_length = geodesic.length;
    orb.period = geodesic.length;
    const int m = std::max(2, static_cast<int>(std::ceil(geodesic.length)));
    orb.steps_per_segment = std::max(1, steps_for(model, geodesic.length / m));
    for (int i = 0; i < m; ++i)
    {
        orb.frames.push_back(geodesic.frame * geodesic_step(geodesic.length * i / m));
    }
    if (model.exact_group())
    {
        orb.converged = true;
        return orb;
    }

    const int n = orb.steps_per_segment;
    const Mat2& gamma = geodesic.element;
    auto target = [&](const std::vector<Mat2>& f, int i) -> Mat2 {
        return i + 1 < m ? f[static_cast<std::size_t>(i) + 1] : Mat2(gamma * f[0]);
    };

    const int dim = 3 * m;
    std::vector<Mat2> ends(static_cast<std::size_t>(m));
    auto full_residual = [&](const std::vector<Mat2>& f, double period, std::vector<Mat2>& e) {
        Eigen::VectorXd r(dim);
        for (int i = 0; i < m; ++i)
        {
            e[static_cast<std::size_t>(i)] = segment(model, f[static_cast<std::size_t>(i)], period / m, n, nullptr);
            r.segment<3>(3 * i) = defect(target(f, i), e[static_cast<std::size_t>(i)]);
        }
        return r;
    };

    Eigen::VectorXd r = full_residual(orb.frames, orb.period, ends);
    const double fd = 1e-7;
    for (orb.iterations = 0; orb.iterations < options.max_iterations; ++orb.iterations)
    {
        orb.residual = r.cwiseAbs().maxCoeff();
        if (orb.residual < options.tolerance)
        {
            orb.converged = true;
            break;
        }
        // Unknowns: (y, w) of frame 0, (x, y, w) of frames 1..m-1, period.
        Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(dim, dim);
        int col = 0;
        for (int i = 0; i < m; ++i)
        {
            for (int a = (i == 0 ? 1 : 0); a < 3; ++a, ++col)
            {
                Eigen::Vector3d d = Eigen::Vector3d::Zero();
                d(a) = fd;
                std::vector<Mat2> f = orb.frames;
                const auto ui = static_cast<std::size_t>(i);
                f[ui] = f[ui] * sl2_exp(d(0), d(1), d(2));
                const Mat2 e = segment(model, f[ui], orb.period / m, n, nullptr);
                jac.block<3, 1>(3 * i, col) = (defect(target(f, i), e) - r.segment<3>(3 * i)) / fd;
                // Frame i is also the target of the previous segment.
                const int prev = (i + m - 1) % m;
                jac.block<3, 1>(3 * prev, col) =
                    (defect(target(f, prev), ends[static_cast<std::size_t>(prev)]) - r.segment<3>(3 * prev)) / fd;
            }
        }
        std::vector<Mat2> scratch(static_cast<std::size_t>(m));
        const double dT = fd * orb.period;
        jac.col(col) = (full_residual(orb.frames, orb.period + dT, scratch) - r) / dT;

        const Eigen::VectorXd step = jac.colPivHouseholderQr().solve(-r);
        col = 0;
        for (int i = 0; i < m; ++i)
        {
            Eigen::Vector3d d = Eigen::Vector3d::Zero();
            for (int a = (i == 0 ? 1 : 0); a < 3; ++a, ++col)
            {
                d(a) = step(col);
            }
            Mat2& g = orb.frames[static_cast<std::size_t>(i)];
            g = g * sl2_exp(d(0), d(1), d(2));
            renormalize_det(g);
        }
        orb.period += step(col);
        if (!(orb.period > 0.0) || !step.allFinite())
        {
            break;
        }
        r = full_residual(orb.frames, orb.period, ends);
    }
    return orb;
}

OrbitIntegrals orbit_integrals(const FlowModel& model, const PeriodicOrbit& orbit)
{
    OrbitIntegrals out;
    out.period = orbit.period;
    if (model.exact_group())
    {
        out.int_u = orbit.period;
        out.u_start = 1.0;
        return out;
    }
    const int m = static_cast<int>(orbit.frames.size());
    std::vector<StepNodes> nodes;
    for (const Mat2& g : orbit.frames)
    {
        segment(model, g, orbit.period / m, orbit.steps_per_segment, &nodes);
    }
    const double dt = orbit.period / (m * orbit.steps_per_segment);

    // The unstable solution is the attracting periodic solution forward in time.
    double u = 1.0;
    for (int loop = 0; loop < 200; ++loop)
    {
        RiccatiStepper r(u);
        for (const auto& nd : nodes)
        {
            r.step(dt, nd.curvature[0], nd.curvature[1]);
        }
        const bool done = std::abs(r.value() - u) < 1e-14;
        u = r.value();
        if (done)
        {
            break;
        }
    }
    RiccatiStepper r(u);
    double bump = 0.0;
    for (const auto& nd : nodes)
    {
        r.step(dt, nd.curvature[0], nd.curvature[1]);
        bump += 0.5 * dt * (nd.bump[0] + nd.bump[1]);
    }
    if (!(r.value() > 0.0))
    {
        throw Error(ErrorKind::NonHyperbolic, "periodic Riccati solution is not positive");
    }
    out.u_start = u;
    out.int_u = r.integral();
    out.int_bump = bump;
    return out;
}

} // namespace rplab
