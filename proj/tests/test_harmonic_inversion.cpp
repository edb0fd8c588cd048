#include <doctest.h>

#include <algorithm>
#include <random>

#include "rplab/error.hpp"
#include "rplab/harmonic_inversion.hpp"

using namespace rplab;

namespace
{

// Real signal from conjugate pairs: sum_j 2 Re(a_j e^{z_j t}).
std::vector<double> synthesize(const std::vector<cplx>& z, const std::vector<cplx>& a, double dt, int n)
{
    std::vector<double> c(static_cast<std::size_t>(n), 0.0);
    for (int m = 0; m < n; ++m)
    {
        for (std::size_t j = 0; j < z.size(); ++j)
        {
            c[static_cast<std::size_t>(m)] += 2.0 * std::real(a[j] * std::exp(z[j] * (m * dt)));
        }
    }
    return c;
}

double max_mismatch(const ModeSet& ms, const std::vector<cplx>& z)
{
    double worst = 0.0;
    for (const cplx& zt : z)
    {
        for (const cplx& target : {zt, std::conj(zt)})
        {
            double best = 1e300;
            for (const auto& m : ms.modes)
            {
                best = std::min(best, std::abs(m.z - target));
            }
            worst = std::max(worst, best);
        }
    }
    return worst;
}

} // namespace

TEST_CASE("six damped modes are recovered from clean and noisy data")
{
    const std::vector<cplx> z{{-0.05, 1.0}, {-0.1, 2.0}, {-0.15, 3.5}};
    const std::vector<cplx> a{{1.0, 0.2}, {0.7, -0.3}, {0.5, 0.1}};
    const double dt = 0.05;
    std::vector<double> c = synthesize(z, a, dt, 1000);

    InversionOptions opt;
    opt.max_modes = 6;
    opt.sv_threshold = 1e-2;
    const ModeSet clean = harmonic_inversion(c, dt, opt);
    CHECK(clean.rank == 6);
    CHECK(max_mismatch(clean, z) < 1e-6);
    CHECK(clean.residual_norm < 1e-8 * clean.signal_norm);
    for (std::size_t m = 0; m < c.size(); m += 97)
    {
        CHECK(evaluate_modes(clean.modes, m * dt) == doctest::Approx(c[m]).epsilon(1e-8));
    }

    std::mt19937_64 rng(5);
    std::normal_distribution<double> noise(0.0, 0.01 * std::abs(c[0]));
    for (double& x : c)
    {
        x += noise(rng);
    }
    const ModeSet noisy = harmonic_inversion(c, dt, opt);
    CHECK(max_mismatch(noisy, z) < 1e-2);
}

TEST_CASE("close frequencies resolve only on long records")
{
    // The singular values that separate the two lines scale like (dw T)^2;
    // on the short record they fall below the threshold and the pair merges.
    const std::vector<cplx> z{{-0.01, 2.0}, {-0.01, 2.1}};
    const std::vector<cplx> a{{1.0, 0.0}, {1.0, 0.0}};
    InversionOptions opt;
    opt.max_modes = 4;
    opt.sv_threshold = 0.05;
    const double dt = 0.05;

    const ModeSet long_rec = harmonic_inversion(synthesize(z, a, dt, 4000), dt, opt);
    CHECK(long_rec.rank == 4);
    CHECK(max_mismatch(long_rec, z) < 1e-4);

    const ModeSet short_rec = harmonic_inversion(synthesize(z, a, dt, 400), dt, opt);
    CHECK(short_rec.rank == 2);
    REQUIRE(short_rec.modes.size() == 2);
    CHECK(short_rec.modes[0].z.imag() > 1.95);
    CHECK(short_rec.modes[0].z.imag() < 2.15);
}

TEST_CASE("real input gives conjugate pairs; zero input gives no modes")
{
    std::mt19937_64 rng(3);
    std::normal_distribution<double> noise(0.0, 1e-3);
    std::vector<double> c = synthesize({{-0.2, 1.0}, {-0.4, 2.5}}, {{1.0, 0.0}, {0.3, 0.3}}, 0.05, 800);
    for (double& x : c)
    {
        x += noise(rng);
    }
    InversionOptions opt;
    opt.max_modes = 8;
    opt.sv_threshold = 1e-2;
    const ModeSet ms = harmonic_inversion(c, 0.05, opt);
    for (const auto& m : ms.modes)
    {
        double best = 1e300;
        for (const auto& n : ms.modes)
        {
            best = std::min(best, std::abs(n.z - std::conj(m.z)));
        }
        CHECK(best < 1e-8);
    }

    opt.max_modes = 4;
    const ModeSet none = harmonic_inversion(std::vector<double>(100, 0.0), 0.1, opt);
    CHECK(none.modes.empty());
    CHECK(none.rank == 0);
}

TEST_CASE("rank follows the singular value threshold")
{
    const std::vector<double> c = synthesize({{-0.4, 1.0}}, {{1.0, 0.0}}, 0.1, 200);
    const ModeSet ms = harmonic_inversion(c, 0.1);
    CHECK(ms.rank == 2);
    REQUIRE(ms.modes.size() == 2);
    // Conjugate pair, sorted by Im descending.
    CHECK(ms.modes[0].z.imag() > 0.0);
    CHECK(std::abs(ms.modes[0].z - std::conj(ms.modes[1].z)) < 1e-10);
    CHECK(std::abs(ms.modes[0].amplitude - cplx(1.0, 0.0)) < 1e-8);
}

TEST_CASE("amplitudes for fixed exponents")
{
    const std::vector<cplx> z{{-0.2, 1.0}, {-0.2, -1.0}};
    const std::vector<double> c = synthesize({z[0]}, {{0.5, 0.25}}, 0.1, 100);
    const std::vector<cplx> a = fit_amplitudes(c, 0.1, z);
    CHECK(std::abs(a[0] - cplx(0.5, 0.25)) < 1e-10);
    CHECK(std::abs(a[1] - cplx(0.5, -0.25)) < 1e-10);
}

TEST_CASE("frequencies near the Nyquist bound are flagged")
{
    const double dt = 0.1;
    const std::vector<double> c = synthesize({{-0.1, 0.95 * pi / dt}}, {{1.0, 0.0}}, dt, 200);
    const ModeSet ms = harmonic_inversion(c, dt);
    CHECK(ms.aliasing_warning);
}

TEST_CASE("short series are rejected")
{
    InversionOptions opt;
    opt.max_modes = 10;
    CHECK_THROWS_AS(harmonic_inversion(std::vector<double>(20, 1.0), 0.1, opt), Error);
}

TEST_CASE("noise realisation sets the rank")
{
    const double dt = 0.1;
    const std::vector<double> clean = synthesize({{-0.3, 1.2}}, {{1.0, 0.0}}, dt, 400);
    std::mt19937_64 rng(12);
    std::normal_distribution<double> noise(0.0, 2e-3);
    std::vector<double> a = clean;
    std::vector<double> b = clean;
    std::vector<double> half_diff(clean.size());
    std::vector<double> mean(clean.size());
    for (std::size_t m = 0; m < clean.size(); ++m)
    {
        a[m] += noise(rng);
        b[m] += noise(rng);
        mean[m] = 0.5 * (a[m] + b[m]);
        half_diff[m] = 0.5 * (a[m] - b[m]);
    }
    InversionOptions opt;
    opt.max_modes = 20;
    opt.sv_threshold = noise_sv_threshold(mean, half_diff);
    const ModeSet ms = harmonic_inversion(mean, dt, opt);
    CHECK(ms.rank == 2);
    CHECK(max_mismatch(ms, {{-0.3, 1.2}}) < 1e-2);

    opt.sv_threshold = 1e-6;
    CHECK(harmonic_inversion(mean, dt, opt).rank == 20);
}
