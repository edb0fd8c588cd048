#include <doctest.h>

#include "helpers.hpp"
#include "rplab/band_edges.hpp"
#include "rplab/error.hpp"

using namespace rplab;
using rplab::test::exact_model;
using rplab::test::perturbed_model;

namespace
{

SamplingPlan small_plan(std::size_t n)
{
    SamplingPlan plan;
    plan.n_orbits = n;
    plan.windows = {25.0, 50.0};
    plan.max_word_length = 4;
    plan.max_closed = 8;
    return plan;
}

} // namespace

TEST_CASE("constant curvature edges sit at -1/2 - k")
{
    const SamplingPlan plan = small_plan(20);
    const OrbitEnsemble grid = orbit_ensemble(exact_model(), plan);
    const ClosedEnsemble closed = closed_ensemble(exact_model(), plan);
    for (int k = 0; k <= 3; ++k)
    {
        const BandEdges e = band_edges(grid, closed, PotentialSpec{}, k, 1e-3);
        CHECK(e.gamma_minus == doctest::Approx(-0.5 - k).epsilon(1e-12));
        CHECK(e.gamma_plus == doctest::Approx(-0.5 - k).epsilon(1e-12));
        CHECK(e.converged);
    }
    PotentialSpec half_u;
    half_u.c2 = 1.0;
    const BandEdges e0 = band_edges(grid, closed, half_u, 0, 1e-3);
    CHECK(std::abs(e0.gamma_plus) < 1e-12);
    CHECK(std::abs(e0.gamma_minus) < 1e-12);
}

TEST_CASE("Birkhoff averages of the damping function")
{
    const FlowModel& m = exact_model();
    const PhasePoint p = sample_liouville(m, 1, 0);
    PotentialSpec v;
    v.c0 = 0.25;
    CHECK(birkhoff_damping(m, v, p, 10.0) == doctest::Approx(-0.25).epsilon(1e-12));
    CHECK(birkhoff_damping(m, v, p, 10.0, 2) == doctest::Approx(-2.25).epsilon(1e-12));
    const PhaseFunction one = [](const PhasePoint&) { return 1.0; };
    CHECK(birkhoff_average(m, one, p, 3.0) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("ensemble integrals agree with direct Birkhoff averages")
{
    const FlowModel& m = perturbed_model();
    SamplingPlan plan = small_plan(2);
    plan.closed_geodesics = false;
    const OrbitEnsemble grid = orbit_ensemble(m, plan);
    REQUIRE(grid.int_u.size() == 2);
    for (std::size_t i = 0; i < 2; ++i)
    {
        const double u_avg = grid.int_u[i][1] / plan.windows[1];
        CHECK(u_avg > 0.5);
        CHECK(u_avg < 1.2);
        const double b_avg = grid.int_bump[i][1] / plan.windows[1];
        CHECK(b_avg > 0.0);
    }
}

TEST_CASE("inverse-T extrapolation")
{
    const std::vector<double> t{50.0, 100.0, 200.0};
    std::vector<double> y;
    for (double x : t)
    {
        y.push_back(-0.4 + 3.0 / x);
    }
    CHECK(extrapolate_inverse_t(t, y) == doctest::Approx(-0.4).epsilon(1e-12));
}

TEST_CASE("periodic orbits of the perturbed flow close up")
{
    const FlowModel& m = perturbed_model();
    const auto geos = closed_geodesics(*m.group, 3, 4);
    for (const auto& cg : geos)
    {
        const PeriodicOrbit po = periodic_orbit(m, cg);
        CHECK(po.converged);
        CHECK(po.residual < 1e-9);
        // Conformal factor e^psi >= 1 only lengthens curves near the bump.
        CHECK(po.period > 0.8 * cg.length);
        CHECK(po.period < 1.5 * cg.length);
        const OrbitIntegrals oi = orbit_integrals(m, po);
        CHECK(oi.int_u / oi.period > 0.5);
        CHECK(oi.u_start > 0.0);
    }
    // At epsilon = 0 the period is the hyperbolic length.
    const PeriodicOrbit po0 = periodic_orbit(exact_model(), geos.front());
    CHECK(po0.period == doctest::Approx(geos.front().length).epsilon(1e-10));
}

TEST_CASE("sampling plan validation")
{
    SamplingPlan plan;
    plan.windows = {100.0};
    CHECK_THROWS_AS(plan.validate(20.0), Error);
    plan.windows = {100.0, 50.0};
    CHECK_THROWS_AS(plan.validate(20.0), Error);
    plan.windows = {50.0, 100.0};
    CHECK_NOTHROW(plan.validate(20.0));
}
