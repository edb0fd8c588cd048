#include "rplab/geodesic_flow.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "rplab/error.hpp"
#include "rplab/liouville.hpp"

namespace rplab
{

namespace
{

// Two-stage Gauss-Legendre Butcher tableau.
constexpr double sqrt3_6 = 0.28867513459481288225;
constexpr double a11 = 0.25;
constexpr double a12 = 0.25 - sqrt3_6;
constexpr double a21 = 0.25 + sqrt3_6;
constexpr double a22 = 0.25;

// Reductions allowed per step: crossing near a vertex visits at most the
// tiles around it.
constexpr int max_reductions_per_step = 4;

struct Force
{
    cplx dw;
    cplx dxi;
    double curvature;
    double bump;
};

// Hamiltonian vector field of H = 1/2 e^{-2 Phi} |xi|^2 and curvature at w.
Force conformal_force(const FlowModel& model, cplx w, cplx xi)
{
    Jet2 jet;
    if (model.epsilon != 0.0)
    {
        jet = model.bump.jet(w);
    }
    const double q = 1.0 - std::norm(w);
    const double e = std::exp(-2.0 * model.epsilon * jet.value) * q * q * 0.25;
    const cplx grad_phi = model.epsilon * jet.grad + 2.0 * w / q;
    Force f;
    f.dw = e * xi;
    f.dxi = e * std::norm(xi) * grad_phi;
    f.curvature = -e * (model.epsilon * jet.laplacian + 4.0 / (q * q));
    f.bump = jet.value;
    return f;
}

double conformal_phi(const FlowModel& model, cplx w)
{
    return model.psi(w) + std::log(2.0 / (1.0 - std::norm(w)));
}

double phi_at(const FlowModel& model, cplx w, bool exact)
{
    return exact ? std::log(2.0 / (1.0 - std::norm(w))) : conformal_phi(model, w);
}

} // namespace

FlowStepper::FlowStepper(const FlowModel& model) : model_(&model), exact_(model.exact_group())
{
}

void FlowStepper::reset(const PhasePoint& p)
{
    applied_ = Mat2::Identity();
    stage_dt_ = 0.0;
    g_ = p.g;
    model_->group->reduce(g_, &applied_);
    if (!exact_)
    {
        PhasePoint q{g_};
        s_.w = q.disk_point();
        s_.xi = std::exp(conformal_phi(*model_, s_.w)) * std::polar(1.0, q.disk_angle());
    }
}

bool FlowStepper::reduce_conformal()
{
    const FuchsianGroup& group = *model_->group;
    for (int count = 0;; ++count)
    {
        const int k = group.exit_side(s_.w);
        if (k < 0)
        {
            return count > 0;
        }
        if (count >= max_reductions_per_step)
        {
            throw Error(ErrorKind::StepTooLarge,
                        "trajectory left the tiles adjacent to the polygon within one step");
        }
        const Mat2& ginv = group.generator(group.inverse(k));
        cplx jac;
        s_.w = disk_action(ginv, s_.w, &jac);
        s_.xi /= std::conj(jac);
        applied_ = ginv * applied_;
    }
}

void FlowStepper::step(double dt)
{
    if (exact_)
    {
        g_ = g_ * geodesic_step(dt);
        const int n = model_->group->reduce(g_, &applied_);
        if (n > max_reductions_per_step)
        {
            throw Error(ErrorKind::StepTooLarge,
                        "trajectory left the tiles adjacent to the polygon within one step");
        }
        renormalize_det(g_);
        nodes_.curvature = {-1.0, -1.0};
        nodes_.bump = {0.0, 0.0};
        return;
    }

    const cplx w0 = s_.w;
    const cplx x0 = s_.xi;
    Force f1;
    Force f2;
    if (stage_dt_ == dt)
    {
        // Linear extrapolation of the previous step's stage slopes.
        constexpr double r = 1.0 / (gauss_nodes[1] - gauss_nodes[0]);
        constexpr double e1 = (1.0 + gauss_nodes[0] - gauss_nodes[0]) * r;
        constexpr double e2 = (1.0 + gauss_nodes[1] - gauss_nodes[0]) * r;
        f1.dw = stage_[0] + e1 * (stage_[2] - stage_[0]);
        f2.dw = stage_[0] + e2 * (stage_[2] - stage_[0]);
        f1.dxi = stage_[1] + e1 * (stage_[3] - stage_[1]);
        f2.dxi = stage_[1] + e2 * (stage_[3] - stage_[1]);
    }
    else
    {
        f1 = conformal_force(*model_, w0, x0);
        f2 = f1;
    }
    bool converged = false;
    for (int it = 0; it < 60; ++it)
    {
        const Force n1 = conformal_force(*model_, w0 + dt * (a11 * f1.dw + a12 * f2.dw),
                                         x0 + dt * (a11 * f1.dxi + a12 * f2.dxi));
        const Force n2 = conformal_force(*model_, w0 + dt * (a21 * f1.dw + a22 * f2.dw),
                                         x0 + dt * (a21 * f1.dxi + a22 * f2.dxi));
        const double change = std::abs(n1.dw - f1.dw) + std::abs(n2.dw - f2.dw) +
                              std::abs(n1.dxi - f1.dxi) + std::abs(n2.dxi - f2.dxi);
        const double scale = std::abs(n1.dw) + std::abs(n1.dxi) + std::abs(n2.dw) + std::abs(n2.dxi);
        f1 = n1;
        f2 = n2;
        if (change <= 1e-14 * scale)
        {
            converged = true;
            break;
        }
    }
    if (!converged)
    {
        throw Error(ErrorKind::StepTooLarge, "implicit Gauss-Legendre stage equations did not converge");
    }
    s_.w = w0 + 0.5 * dt * (f1.dw + f2.dw);
    s_.xi = x0 + 0.5 * dt * (f1.dxi + f2.dxi);
    nodes_.curvature = {f1.curvature, f2.curvature};
    nodes_.bump = {f1.bump, f2.bump};
    stage_ = {f1.dw, f1.dxi, f2.dw, f2.dxi};
    stage_dt_ = reduce_conformal() ? 0.0 : dt;
}

PhasePoint FlowStepper::point() const
{
    if (exact_)
    {
        return PhasePoint{g_};
    }
    return PhasePoint::from_disk(s_.w, std::arg(s_.xi));
}

cplx FlowStepper::base() const
{
    return exact_ ? to_disk(mobius(g_, I)) : s_.w;
}

double FlowStepper::angle() const
{
    if (exact_)
    {
        return PhasePoint{g_}.disk_angle();
    }
    const double a = std::arg(s_.xi);
    return a < 0 ? a + 2.0 * pi : a;
}

DiskState FlowStepper::disk_state() const
{
    if (!exact_)
    {
        return s_;
    }
    const cplx w = base();
    return DiskState{w, std::exp(phi_at(*model_, w, true)) * std::polar(1.0, angle())};
}

double FlowStepper::curvature() const
{
    return exact_ ? -1.0 : gaussian_curvature(*model_, s_.w);
}

double FlowStepper::bump() const
{
    return model_->bump.value(base());
}

double FlowStepper::energy() const
{
    if (exact_)
    {
        return 0.5;
    }
    return 0.5 * std::exp(-2.0 * conformal_phi(*model_, s_.w)) * std::norm(s_.xi);
}

int steps_for(const FlowModel& model, double t)
{
    return static_cast<int>(std::ceil(std::abs(t) / model.h - 1e-9));
}

PhasePoint flow_map_steps(const FlowModel& model, const PhasePoint& p, double t, int n_steps)
{
    if (std::abs(t) > model.horizon)
    {
        throw Error(ErrorKind::HorizonExceeded, "flow time exceeds the configured horizon");
    }
    if (t == 0.0)
    {
        return p;
    }
    FlowStepper st(model);
    st.reset(p);
    const double dt = t / n_steps;
    for (int i = 0; i < n_steps; ++i)
    {
        st.step(dt);
    }
    return st.point();
}

PhasePoint flow_map(const FlowModel& model, const PhasePoint& p, double t)
{
    if (model.exact_group() && std::abs(t) <= model.horizon && t != 0.0)
    {
        // Exact: one right multiplication, then reduction.
        PhasePoint q{p.g * geodesic_step(t)};
        model.group->reduce(q.g);
        renormalize_det(q.g);
        return q;
    }
    return flow_map_steps(model, p, t, std::max(1, steps_for(model, t)));
}

Mat2 flow_lifted(const FlowModel& model, const Mat2& g, double t, int n_steps)
{
    if (model.exact_group())
    {
        return g * geodesic_step(t);
    }
    FlowStepper st(model);
    st.reset(PhasePoint{g});
    const double dt = t / n_steps;
    for (int i = 0; i < n_steps; ++i)
    {
        st.step(dt);
    }
    return sl2_inverse(st.applied()) * st.point().g;
}

PhasePoint flow_map_integrated(const FlowModel& model, const PhasePoint& p, double t)
{
    FlowModel forced = model;
    // A tiny positive epsilon routes through the integrator; the bump
    // contribution is then at rounding level.
    forced.epsilon = model.epsilon == 0.0 ? 1e-300 : model.epsilon;
    return flow_map_steps(forced, p, t, std::max(1, steps_for(forced, t)));
}

double gaussian_curvature(const FlowModel& model, cplx w)
{
    if (model.epsilon == 0.0)
    {
        return -1.0;
    }
    const Jet2 jet = model.bump.jet(w);
    const double q = 1.0 - std::norm(w);
    const double lap_hyp = 0.25 * q * q * model.epsilon * jet.laplacian;
    return std::exp(-2.0 * model.epsilon * jet.value) * (-1.0 - lap_hyp);
}

Trajectory integrate_trajectory(const FlowModel& model, const PhasePoint& p, double t, int n_steps)
{
    if (std::abs(t) > model.horizon)
    {
        throw Error(ErrorKind::HorizonExceeded, "flow time exceeds the configured horizon");
    }
    Trajectory traj;
    traj.step = n_steps > 0 ? t / n_steps : 0.0;
    traj.points.reserve(static_cast<std::size_t>(n_steps) + 1);
    traj.nodes.reserve(static_cast<std::size_t>(n_steps));
    FlowStepper st(model);
    st.reset(p);
    auto record = [&] {
        const cplx w = st.base();
        traj.points.push_back({w, st.angle(), model.bump.value(w), st.curvature()});
    };
    record();
    for (int i = 0; i < n_steps; ++i)
    {
        st.step(traj.step);
        traj.nodes.push_back(st.last_nodes());
        record();
    }
    traj.end = st.point();
    return traj;
}

Trajectory integrate_trajectory(const FlowModel& model, const PhasePoint& p, double t)
{
    return integrate_trajectory(model, p, t, steps_for(model, t));
}

void RiccatiStepper::step(double dt, double k_first, double k_second)
{
    double u1 = u_;
    double u2 = u_;
    double f1 = -k_first - u1 * u1;
    double f2 = -k_second - u2 * u2;
    for (int it = 0; it < 100; ++it)
    {
        const double n1 = u_ + dt * (a11 * f1 + a12 * f2);
        const double n2 = u_ + dt * (a21 * f1 + a22 * f2);
        const double change = std::abs(n1 - u1) + std::abs(n2 - u2);
        u1 = n1;
        u2 = n2;
        f1 = -k_first - u1 * u1;
        f2 = -k_second - u2 * u2;
        if (change <= 1e-16 * (std::abs(u1) + std::abs(u2)))
        {
            break;
        }
    }
    u_ += 0.5 * dt * (f1 + f2);
    integral_ += 0.5 * dt * (u1 + u2);
    if (!std::isfinite(u_) || std::abs(u_) > 1e8)
    {
        throw Error(ErrorKind::NonHyperbolic, "Riccati solution diverged (conjugate point)");
    }
}

std::vector<double> riccati_forward_over_backward(const Trajectory& traj, double u_start)
{
    const std::size_t n = traj.nodes.size();
    std::vector<double> u(n + 1);
    RiccatiStepper r(u_start);
    u[n] = u_start;
    const double dt = std::abs(traj.step);
    for (std::size_t j = n; j-- > 0;)
    {
        // Backward step j has its second node earliest in time.
        r.step(dt, traj.nodes[j].curvature[1], traj.nodes[j].curvature[0]);
        u[j] = r.value();
    }
    return u;
}

double unstable_riccati(const FlowModel& model, const PhasePoint& p)
{
    if (model.exact_group())
    {
        return 1.0;
    }
    const Trajectory past = integrate_trajectory(model, p, -model.t_burn);
    const double u = riccati_forward_over_backward(past, 1.0).front();
    if (!(u > 0.0))
    {
        throw Error(ErrorKind::NonHyperbolic, "unstable Riccati solution is not positive");
    }
    return u;
}

double stable_riccati(const FlowModel& model, const PhasePoint& p)
{
    const Trajectory future = integrate_trajectory(model, p, model.t_burn);
    RiccatiStepper r(-1.0);
    const double dt = std::abs(future.step);
    for (std::size_t j = future.nodes.size(); j-- > 0;)
    {
        r.step(-dt, future.nodes[j].curvature[1], future.nodes[j].curvature[0]);
    }
    if (!(r.value() < 0.0))
    {
        throw Error(ErrorKind::NonHyperbolic, "stable Riccati solution is not negative");
    }
    return r.value();
}

RiccatiOrbit unstable_along_orbit(const FlowModel& model, const PhasePoint& p, double t)
{
    RiccatiOrbit out;
    const double u0 = unstable_riccati(model, p);
    out.trajectory = integrate_trajectory(model, p, t);
    out.u.reserve(out.trajectory.points.size());
    out.u.push_back(u0);
    RiccatiStepper r(u0);
    for (const auto& nd : out.trajectory.nodes)
    {
        r.step(out.trajectory.step, nd.curvature[0], nd.curvature[1]);
        if (!(r.value() > 0.0))
        {
            throw Error(ErrorKind::NonHyperbolic, "unstable Riccati solution is not positive");
        }
        out.u.push_back(r.value());
    }
    out.integral = r.integral();
    return out;
}

double unstable_jacobian_log(const FlowModel& model, const PhasePoint& p, double t)
{
    if (t < 0.0)
    {
        throw Error(ErrorKind::InvalidConfig, "unstable_jacobian_log requires t >= 0");
    }
    if (t == 0.0)
    {
        return 0.0;
    }
    if (std::abs(t) > model.horizon)
    {
        throw Error(ErrorKind::HorizonExceeded, "flow time exceeds the configured horizon");
    }
    if (model.exact_group())
    {
        return t;
    }
    return unstable_along_orbit(model, p, t).integral;
}

double damping(const FlowModel& model, const PotentialSpec& v, const PhasePoint& p)
{
    const double u = unstable_riccati(model, p);
    const double psi = invariant_psi(model, p.disk_point());
    return v(psi, u) - 0.5 * u;
}

PhasePoint flip(const PhasePoint& p)
{
    Mat2 r;
    r << 0.0, 1.0, -1.0, 0.0;
    return PhasePoint{p.g * r};
}

ContactCheck contact_check(const FlowModel& model, const PhasePoint& p)
{
    FlowStepper st(model);
    st.reset(p);
    const DiskState s = st.disk_state();
    Jet2 jet;
    if (model.epsilon != 0.0)
    {
        jet = model.bump.jet(s.w);
    }
    const double q = 1.0 - std::norm(s.w);
    const double e = std::exp(-2.0 * model.epsilon * jet.value) * q * q * 0.25;
    const cplx grad_phi = model.epsilon * jet.grad + 2.0 * s.w / q;
    const cplx wdot = e * s.xi;

    ContactCheck out;
    // alpha = xi . dw (Liouville form), evaluated on X = (wdot, xidot).
    out.alpha_x = s.xi.real() * wdot.real() + s.xi.imag() * wdot.imag();

    // Tangent space of {H = 1/2} intersected with ker alpha, coordinates (w, xi).
    const cplx dh_dw = -e * std::norm(s.xi) * grad_phi;
    const cplx dh_dxi = e * s.xi;
    Eigen::Matrix<double, 2, 4> c;
    c << dh_dw.real(), dh_dw.imag(), dh_dxi.real(), dh_dxi.imag(), s.xi.real(), s.xi.imag(), 0.0, 0.0;
    Eigen::JacobiSVD<Eigen::Matrix<double, 2, 4>> svd(c, Eigen::ComputeFullV);
    const Eigen::Vector4d e1 = svd.matrixV().col(2);
    const Eigen::Vector4d e2 = svd.matrixV().col(3);
    // d alpha = d xi ^ d w.
    out.symplectic = std::abs(e1(2) * e2(0) + e1(3) * e2(1) - e1(0) * e2(2) - e1(1) * e2(3));
    return out;
}

AnosovReport verify_anosov(const FlowModel& model, std::size_t n_samples, double t_check,
                           std::uint64_t seed)
{
    AnosovReport rep;
    rep.lambda_estimate = std::numeric_limits<double>::infinity();
    rep.lambda_stable_estimate = std::numeric_limits<double>::infinity();
    rep.min_symplectic = std::numeric_limits<double>::infinity();
    try
    {
        for (std::size_t i = 0; i < n_samples; ++i)
        {
            const PhasePoint p = sample_liouville(model, seed, i);

            rep.lambda_estimate = std::min(rep.lambda_estimate, unstable_jacobian_log(model, p, t_check) / t_check);

            // Stable bundle: expansion of D phi_{-t} along the past of p.
            const double us = stable_riccati(model, p);
            const Trajectory past = integrate_trajectory(model, p, -t_check);
            RiccatiStepper r(us);
            for (const auto& nd : past.nodes)
            {
                r.step(past.step, nd.curvature[0], nd.curvature[1]);
            }
            rep.lambda_stable_estimate = std::min(rep.lambda_stable_estimate, r.integral() / t_check);

            const ContactCheck cc = contact_check(model, p);
            rep.contact_residual = std::max(rep.contact_residual, std::abs(cc.alpha_x - 1.0));
            rep.min_symplectic = std::min(rep.min_symplectic, cc.symplectic);
        }
    }
    catch (const Error& e)
    {
        if (e.kind() != ErrorKind::NonHyperbolic)
        {
            throw;
        }
        rep.diagnostic = e.what();
        rep.passed = false;
        return rep;
    }
    rep.contact_ok = rep.contact_residual < 1e-10 && rep.min_symplectic > 1e-6;
    rep.passed = rep.contact_ok && rep.lambda_estimate > 0.0 && rep.lambda_stable_estimate > 0.0;
    if (!rep.passed)
    {
        rep.diagnostic = rep.contact_ok ? "non-positive expansion rate" : "contact form check failed";
    }
    return rep;
}

} // namespace rplab
