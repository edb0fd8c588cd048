#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "rplab/error.hpp"
#include "rplab/resonances.hpp"

using namespace rplab;

TEST_CASE("band resonances lie on vertical lines with |z + 1/2 + k|-structure")
{
    const LaplaceSpectrum spec = synthetic_weyl_spectrum(4.0 * pi, 500.0, 0.5, 3);
    const ResonanceList list = resonances_from_laplacian(spec, 3, 0);
    std::size_t n_band = 0;
    for (const auto& r : list)
    {
        if (r.family != ResonanceFamily::Band)
        {
            continue;
        }
        ++n_band;
        CHECK(r.z.real() == -0.5 - r.band);
        const double mu = spec.mu[static_cast<std::size_t>(r.level)];
        CHECK(std::abs(r.z.imag() * r.z.imag() + 0.25 - mu) < 1e-12 * std::max(1.0, mu));
    }
    CHECK(n_band > 0);
    CHECK(conjugation_closed(list, 0.0));
}

TEST_CASE("small eigenvalues give real pairs, integers listed separately")
{
    LaplaceSpectrum spec;
    spec.mu = {0.0, 0.1875, 2.0};
    const ResonanceList list = resonances_from_laplacian(spec, 1, 2);
    int exceptional = 0;
    int integers = 0;
    for (const auto& r : list)
    {
        if (r.family == ResonanceFamily::Exceptional)
        {
            ++exceptional;
            CHECK(r.z.imag() == 0.0);
            // (z + 1/2 + k)^2 = 1/4 - mu
            const double mu = spec.mu[static_cast<std::size_t>(r.level)];
            const double s = r.z.real() + 0.5 + r.band;
            CHECK(s * s == doctest::Approx(0.25 - mu).epsilon(1e-12));
        }
        if (r.family == ResonanceFamily::Integer)
        {
            ++integers;
            CHECK(r.z == cplx(-r.band, 0.0));
        }
    }
    CHECK(exceptional == 2 * 2 * 2);
    CHECK(integers == 2);
    CHECK(conjugation_closed(list, 0.0));
}

TEST_CASE("synthetic spectrum follows the Weyl law")
{
    const double area = 4.0 * pi;
    const LaplaceSpectrum spec = synthetic_weyl_spectrum(area, 2000.0, 0.5, 1);
    CHECK(spec.mu.front() == 0.0);
    CHECK(std::is_sorted(spec.mu.begin(), spec.mu.end()));
    const double x = 1500.0;
    const auto n = std::count_if(spec.mu.begin(), spec.mu.end(), [&](double m) { return m <= x; });
    CHECK(static_cast<double>(n) == doctest::Approx(area * x / (4.0 * pi)).epsilon(0.01));
}

TEST_CASE("spectrum validation")
{
    LaplaceSpectrum spec;
    spec.mu = {0.0, 3.0, 2.0};
    CHECK_THROWS_AS(spec.validate(), Error);
    spec.mu = {0.5, 1.0};
    CHECK_THROWS_AS(spec.validate(), Error);
    spec.mu = {0.0, 1.0};
    spec.area = -1.0;
    CHECK_THROWS_AS(spec.validate(), Error);
}

TEST_CASE("CSV and JSON round trips")
{
    const auto dir = std::filesystem::temp_directory_path() / "rplab_test_resonances";
    std::filesystem::create_directories(dir);
    const std::string csv = (dir / "spec.csv").string();
    LaplaceSpectrum spec = synthetic_weyl_spectrum(7.5, 100.0, 0.3, 9);
    write_spectrum_csv(csv, spec);
    const LaplaceSpectrum back = read_spectrum_csv(csv);
    CHECK(back.area == spec.area);
    CHECK(back.mu == spec.mu);
    CHECK(read_spectrum_csv(csv, 2.0).area == 2.0);

    const ResonanceList list = resonances_from_laplacian(spec, 2, 3);
    const ResonanceList again = resonances_from_json(resonances_to_json(list));
    REQUIRE(again.size() == list.size());
    for (std::size_t i = 0; i < list.size(); ++i)
    {
        CHECK(again[i].z == list[i].z);
        CHECK(again[i].family == list[i].family);
        CHECK(again[i].band == list[i].band);
    }
    std::filesystem::remove_all(dir);
}
