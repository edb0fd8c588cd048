#ifndef RPLAB_RESONANCES_HPP
#define RPLAB_RESONANCES_HPP

///
/// \file resonances.hpp
///
/// Resonance catalog of the geodesic flow of a compact hyperbolic surface,
/// computed from Laplace eigenvalues mu_l:
///   z_{k,l} = -1/2 - k +- i sqrt(mu_l - 1/4),
/// plus the real points z_n = -n, n >= 1.
///

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rplab/hyperbolic.hpp"

namespace rplab
{

struct LaplaceSpectrum
{
    double area = 4.0 * pi;
    std::vector<double> mu; // sorted, mu[0] = 0
    std::string source = "synthetic";

    /// Throws InvalidConfig unless area > 0, sorted, mu[0] = 0 and all >= 0.
    void validate() const;
};

enum class Provenance
{
    Analytic,
    Inverted,
};

enum class ResonanceFamily
{
    Band,        // z_{k,l} with mu_l >= 1/4
    Exceptional, // real pair from mu_l < 1/4
    Integer,     // z_n = -n
    Unassigned,  // no band label (e.g. inverted modes)
};

struct Resonance
{
    cplx z;
    ResonanceFamily family = ResonanceFamily::Band;
    int band = 0;        // k for Band / Exceptional entries, n for Integer ones
    long level = -1;     // eigenvalue index l, if any
    Provenance provenance = Provenance::Analytic;
};

using ResonanceList = std::vector<Resonance>;

ResonanceList resonances_from_laplacian(const LaplaceSpectrum& spec, int k_max, int n_max);

///
/// Eigenvalues (l + jitter * xi_l) 4 pi / area below mu_max, xi_l uniform in
/// [-1/2, 1/2) from `seed`; mu_0 = 0. With jitter = 0 the counting function
/// #{l : mu_l < mu} equals ceil(area mu / 4 pi).
///
LaplaceSpectrum synthetic_weyl_spectrum(double area, double mu_max, double jitter, std::uint64_t seed);

/// Multiset equality of z values under conjugation, within tol.
bool conjugation_closed(const ResonanceList& list, double tol);

// CSV `index,mu` with header; the area lives in `<path>.meta` as `area = ...`
// unless given explicitly.
LaplaceSpectrum read_spectrum_csv(const std::string& path, std::optional<double> area = std::nullopt);
void write_spectrum_csv(const std::string& path, const LaplaceSpectrum& spec);

// JSON array of {re, im, band, provenance}; band is an integer,
// "exceptional", "integer" or null.
std::string resonances_to_json(const ResonanceList& list);
ResonanceList resonances_from_json(const std::string& text);

std::string to_string(Provenance p);

} // namespace rplab

#endif // RPLAB_RESONANCES_HPP
