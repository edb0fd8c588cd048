#include "rplab/band_edges.hpp"

#include <algorithm>
#include <cmath>

#include "rplab/error.hpp"
#include "rplab/parallel.hpp"

namespace rplab
{

void SamplingPlan::validate(double t_burn) const
{
    if (windows.size() < 2)
    {
        throw Error(ErrorKind::InvalidConfig, "sampling plan needs at least two windows");
    }
    if (!(windows.front() > t_burn))
    {
        throw Error(ErrorKind::InvalidConfig, "smallest window must exceed t_burn");
    }
    for (std::size_t j = 1; j < windows.size(); ++j)
    {
        if (!(windows[j] > windows[j - 1]))
        {
            throw Error(ErrorKind::InvalidConfig, "windows must be strictly increasing");
        }
    }
    if (n_orbits == 0 && !closed_geodesics)
    {
        throw Error(ErrorKind::InvalidConfig, "sampling plan has no orbits");
    }
}

SamplingPlan SamplingPlan::from_config(const KeyValueConfig& cfg)
{
    SamplingPlan plan;
    plan.n_orbits = static_cast<std::size_t>(cfg.get_int("n_orbits", static_cast<long long>(plan.n_orbits)));
    plan.windows = cfg.get_list("windows", plan.windows);
    plan.closed_geodesics = cfg.get_bool("closed_geodesics", plan.closed_geodesics);
    plan.max_word_length = static_cast<int>(cfg.get_int("max_word_length", plan.max_word_length));
    plan.max_closed = static_cast<std::size_t>(cfg.get_int("max_closed", static_cast<long long>(plan.max_closed)));
    plan.tolerance = cfg.get_double("extrapolation_tolerance", plan.tolerance);
    return plan;
}

OrbitEnsemble orbit_ensemble(const FlowModel& model, const SamplingPlan& plan)
{
    plan.validate(model.t_burn);
    OrbitEnsemble ens;
    ens.epsilon = model.epsilon;
    const int n_total = steps_for(model, plan.windows.back());
    const double dt = plan.windows.back() / n_total;
    std::vector<int> marks;
    for (double t : plan.windows)
    {
        marks.push_back(static_cast<int>(std::lround(t / dt)));
        ens.windows.push_back(marks.back() * dt);
    }
    const std::size_t nw = marks.size();
    ens.int_u.assign(plan.n_orbits, std::vector<double>(nw, 0.0));
    ens.int_bump.assign(plan.n_orbits, std::vector<double>(nw, 0.0));

    if (model.exact_group())
    {
        // K = -1: the unstable Riccati solution is u = 1 on every orbit.
        for (auto& row : ens.int_u)
        {
            row = ens.windows;
        }
        return ens;
    }

    parallel_for(plan.n_orbits, plan.threads, [&](std::size_t i) {
        const PhasePoint p = sample_liouville(model, plan.seed, i);
        RiccatiStepper r(unstable_riccati(model, p));
        FlowStepper st(model);
        st.reset(p);
        double bump = 0.0;
        std::size_t next = 0;
        for (int s = 1; s <= n_total; ++s)
        {
            st.step(dt);
            const StepNodes& nd = st.last_nodes();
            r.step(dt, nd.curvature[0], nd.curvature[1]);
            bump += 0.5 * dt * (nd.bump[0] + nd.bump[1]);
            if (s == marks[next])
            {
                ens.int_u[i][next] = r.integral();
                ens.int_bump[i][next] = bump;
                ++next;
            }
        }
    });
    return ens;
}

ClosedEnsemble closed_ensemble(const FlowModel& model, const SamplingPlan& plan)
{
    ClosedEnsemble out;
    out.epsilon = model.epsilon;
    if (!plan.closed_geodesics)
    {
        return out;
    }
    const auto geodesics = closed_geodesics(*model.group, plan.max_word_length, plan.max_closed);
    out.attempted = geodesics.size();
    std::vector<OrbitIntegrals> integrals(geodesics.size());
    std::vector<char> ok(geodesics.size(), 0);
    parallel_for(geodesics.size(), plan.threads, [&](std::size_t i) {
        const PeriodicOrbit orbit = periodic_orbit(model, geodesics[i]);
        if (orbit.converged)
        {
            integrals[i] = orbit_integrals(model, orbit);
            ok[i] = 1;
        }
    });
    for (std::size_t i = 0; i < geodesics.size(); ++i)
    {
        if (ok[i])
        {
            out.orbits.push_back(integrals[i]);
        }
        else
        {
            ++out.failed;
        }
    }
    return out;
}

double extrapolate_inverse_t(const std::vector<double>& t, const std::vector<double>& y)
{
    // Normal equations for y = a + b x, x = 1/T.
    const auto n = static_cast<double>(t.size());
    double sx = 0.0;
    double sy = 0.0;
    for (std::size_t j = 0; j < t.size(); ++j)
    {
        sx += 1.0 / t[j];
        sy += y[j];
    }
    const double mx = sx / n;
    const double my = sy / n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t j = 0; j < t.size(); ++j)
    {
        const double dx = 1.0 / t[j] - mx;
        sxx += dx * dx;
        sxy += dx * (y[j] - my);
    }
    if (sxx == 0.0)
    {
        return my;
    }
    return my - (sxy / sxx) * mx;
}

namespace
{

// Average of D - k u without the constant c0 term.
double reduced_average(const PotentialSpec& v, int k, double epsilon, double t, double int_u, double int_bump)
{
    return (v.c1 * epsilon * int_bump + (0.5 * (v.c2 - 1.0) - k) * int_u) / t;
}

} // namespace

BandEdges band_edges(const OrbitEnsemble& grid, const ClosedEnsemble& closed, const PotentialSpec& v, int k,
                     double tolerance)
{
    if (k < 0)
    {
        throw Error(ErrorKind::InvalidConfig, "band index must be non-negative");
    }
    BandEdges out;
    out.k = k;
    out.n_orbits = grid.int_u.size();
    out.n_closed = closed.orbits.size();
    out.horizon = grid.windows.empty() ? 0.0 : grid.windows.back();
    out.min_average_u = std::numeric_limits<double>::infinity();

    bool have_grid = !grid.int_u.empty();
    if (have_grid)
    {
        const std::size_t nw = grid.windows.size();
        std::vector<double> hi(nw, -std::numeric_limits<double>::infinity());
        std::vector<double> lo(nw, std::numeric_limits<double>::infinity());
        for (std::size_t i = 0; i < grid.int_u.size(); ++i)
        {
            for (std::size_t j = 0; j < nw; ++j)
            {
                const double a =
                    reduced_average(v, k, grid.epsilon, grid.windows[j], grid.int_u[i][j], grid.int_bump[i][j]);
                hi[j] = std::max(hi[j], a);
                lo[j] = std::min(lo[j], a);
            }
            out.min_average_u = std::min(out.min_average_u, grid.int_u[i][nw - 1] / grid.windows[nw - 1]);
        }
        out.grid.gamma_plus = v.c0 + extrapolate_inverse_t(grid.windows, hi);
        out.grid.gamma_minus = v.c0 + extrapolate_inverse_t(grid.windows, lo);
        out.extrapolation_error = std::max(std::abs(hi[nw - 1] - hi[nw - 2]), std::abs(lo[nw - 1] - lo[nw - 2]));
        out.converged = out.extrapolation_error <= tolerance;
    }

    if (!closed.orbits.empty())
    {
        double hi = -std::numeric_limits<double>::infinity();
        double lo = std::numeric_limits<double>::infinity();
        for (const auto& o : closed.orbits)
        {
            const double a = reduced_average(v, k, closed.epsilon, o.period, o.int_u, o.int_bump);
            hi = std::max(hi, a);
            lo = std::min(lo, a);
            out.min_average_u = std::min(out.min_average_u, o.int_u / o.period);
        }
        out.closed.gamma_plus = v.c0 + hi;
        out.closed.gamma_minus = v.c0 + lo;
    }

    if (have_grid && !closed.orbits.empty())
    {
        out.gamma_plus = std::max(out.grid.gamma_plus, out.closed.gamma_plus);
        out.gamma_minus = std::min(out.grid.gamma_minus, out.closed.gamma_minus);
    }
    else if (have_grid)
    {
        out.gamma_plus = out.grid.gamma_plus;
        out.gamma_minus = out.grid.gamma_minus;
    }
    else if (!closed.orbits.empty())
    {
        out.gamma_plus = out.closed.gamma_plus;
        out.gamma_minus = out.closed.gamma_minus;
    }
    else
    {
        throw Error(ErrorKind::InvalidConfig, "no orbits available for band edges");
    }
    return out;
}

BandEdges band_edges(const FlowModel& model, const PotentialSpec& v, int k, const SamplingPlan& plan)
{
    return band_edges(orbit_ensemble(model, plan), closed_ensemble(model, plan), v, k, plan.tolerance);
}

double birkhoff_average(const FlowModel& model, const PhaseFunction& f, const PhasePoint& p, double t)
{
    if (!(t > 0.0))
    {
        throw Error(ErrorKind::InvalidConfig, "birkhoff_average requires t > 0");
    }
    const Trajectory traj = integrate_trajectory(model, p, -t);
    const std::size_t n = traj.points.size() - 1;
    const double f0 = f(PhasePoint::from_disk(traj.points[0].w, traj.points[0].theta));
    // Centred on f0: a constant observable averages to itself exactly.
    double acc = 0.0;
    for (std::size_t i = 1; i <= n; ++i)
    {
        const auto& q = traj.points[i];
        const double w = i == n ? 0.5 : 1.0;
        acc += w * (f(PhasePoint::from_disk(q.w, q.theta)) - f0);
    }
    return f0 + acc / static_cast<double>(n);
}

double birkhoff_damping(const FlowModel& model, const PotentialSpec& v, const PhasePoint& p, double t, int k)
{
    if (!(t > 0.0))
    {
        throw Error(ErrorKind::InvalidConfig, "birkhoff_damping requires t > 0");
    }
    const Trajectory past = integrate_trajectory(model, p, -t);
    double u_start = 1.0;
    if (!model.exact_group())
    {
        const Trajectory burn = integrate_trajectory(model, past.end, -model.t_burn);
        u_start = riccati_forward_over_backward(burn, 1.0).front();
    }
    RiccatiStepper r(u_start);
    double bump = 0.0;
    const double dt = std::abs(past.step);
    for (std::size_t j = past.nodes.size(); j-- > 0;)
    {
        const StepNodes& nd = past.nodes[j];
        r.step(dt, nd.curvature[1], nd.curvature[0]);
        bump += 0.5 * dt * (nd.bump[0] + nd.bump[1]);
    }
    return v.c0 + reduced_average(v, k, model.epsilon, t, r.integral(), bump);
}

} // namespace rplab
