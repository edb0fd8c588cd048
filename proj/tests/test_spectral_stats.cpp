#include <doctest.h>

#include <cmath>

#include "rplab/spectral_stats.hpp"

using namespace rplab;

namespace
{

ResonanceList catalog()
{
    return resonances_from_laplacian(synthetic_weyl_spectrum(4.0 * pi, 4000.0, 0.5, 2), 3, 3);
}

std::vector<EdgePair> exact_edges()
{
    std::vector<EdgePair> e;
    for (int k = 0; k <= 3; ++k)
    {
        e.push_back({-0.5 - k, -0.5 - k});
    }
    return e;
}

} // namespace

TEST_CASE("window counts tile an interval")
{
    const ResonanceList list = catalog();
    std::size_t tiled = 0;
    for (int b = 10; b < 20; ++b)
    {
        tiled += weyl_count(list, 0, b);
    }
    std::size_t direct = 0;
    for (const auto& r : list)
    {
        if (in_band(r, 0) && r.z.imag() >= 10.0 && r.z.imag() < 20.0)
        {
            ++direct;
        }
    }
    CHECK(tiled == direct);
    CHECK(direct > 0);
}

TEST_CASE("band counts grow linearly with prefactor area / 2 pi")
{
    const WeylFit fit = weyl_fit(catalog(), 0, geometric_ladder(10.0, 60.0, 12));
    CHECK(fit.fitted);
    CHECK(fit.slope == doctest::Approx(1.0).epsilon(0.1));
    CHECK(fit.prefactor == doctest::Approx(2.0).epsilon(0.05));
    CHECK(fit.constant >= 1.0);
}

TEST_CASE("band membership against exact edges")
{
    ResonanceList list = catalog();
    const BandTestReport rep = band_membership(list, exact_edges(), 1e-3);
    CHECK(rep.violations == 0);
    CHECK(rep.assigned == list.size());

    Resonance off;
    off.z = cplx(-1.0, 20.0);
    off.family = ResonanceFamily::Unassigned;
    Resonance low = off;
    low.z = cplx(-1.0, 2.0);
    const BandTestReport rep2 = band_membership({off, low}, exact_edges(), 1e-3, 5.0);
    CHECK(rep2.entries[0].status == MembershipStatus::Violation);
    CHECK(rep2.entries[1].status == MembershipStatus::Exempt);
    CHECK(rep2.violations == 1);

    // Overlapping strips make the assignment ambiguous.
    Resonance mid = off;
    mid.z = cplx(-1.0, 30.0);
    const BandTestReport rep3 = band_membership({mid}, {{-1.2, -0.5}, {-1.5, -0.9}}, 0.0);
    CHECK(rep3.entries[0].status == MembershipStatus::Ambiguous);
    CHECK(rep3.entries[0].band == 0);
}

TEST_CASE("concentration vanishes on the constant-curvature catalog")
{
    const ConcentrationReport rep = concentration(catalog(), -0.5, geometric_ladder(5.0, 60.0, 8));
    for (const auto& p : rep.points)
    {
        REQUIRE(p.statistic.has_value());
        CHECK(*p.statistic == 0.0);
    }
    CHECK(rep.nonincreasing);
}

TEST_CASE("concentration is invariant under a common shift")
{
    ResonanceList list;
    for (int l = 1; l <= 200; ++l)
    {
        Resonance r;
        r.z = cplx(-0.5 + 0.3 * std::sin(l) / std::log(1.0 + l), 0.5 * l);
        list.push_back(r);
    }
    ResonanceList shifted = list;
    for (auto& r : shifted)
    {
        r.z += 0.25;
    }
    const auto ladder = geometric_ladder(2.0, 90.0, 6);
    const ConcentrationReport a = concentration(list, -0.5, ladder);
    const ConcentrationReport b = concentration(shifted, -0.25, ladder);
    for (std::size_t i = 0; i < ladder.size(); ++i)
    {
        CHECK(*a.points[i].statistic == doctest::Approx(*b.points[i].statistic).epsilon(1e-12));
    }
}

TEST_CASE("concentration decreases on a logarithmically converging catalog")
{
    ResonanceList list;
    for (int l = 1; l <= 2000; ++l)
    {
        const double im = 0.05 * l + 1.0;
        const double sign = l % 2 ? 1.0 : -1.0;
        Resonance r;
        r.z = cplx(-0.5 + sign * 0.3 / std::log(1.0 + im), im);
        list.push_back(r);
    }
    const ConcentrationReport rep = concentration(list, -0.5, geometric_ladder(5.0, 100.0, 10));
    CHECK(rep.nonincreasing);
    CHECK(*rep.points.back().statistic < *rep.points.front().statistic);

    const ConcentrationReport empty = concentration(list, -0.5, {0.5});
    CHECK(!empty.points[0].statistic.has_value());
}
