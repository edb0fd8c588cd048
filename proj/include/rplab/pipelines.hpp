#ifndef RPLAB_PIPELINES_HPP
#define RPLAB_PIPELINES_HPP

///
/// \file pipelines.hpp
///
/// Experiment pipelines behind the `rplab` subcommands. Each writes its
/// artifact(s) plus a `<artifact>.meta.json` sidecar holding the config hash,
/// seed and version; outputs depend only on (config, seed, inputs).
///

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rplab/band_edges.hpp"
#include "rplab/config.hpp"
#include "rplab/correlation.hpp"
#include "rplab/resonances.hpp"
#include "rplab/spectral_stats.hpp"

namespace rplab
{

struct RunContext
{
    KeyValueConfig config;
    std::string config_path;
    std::uint64_t seed = 1;
    std::string out;
    int threads = 1;
    bool quiet = false;
};

std::vector<BandEdges> run_band_edges(const RunContext& ctx, const std::vector<int>& ks);

ResonanceList run_resonances(const RunContext& ctx, const std::optional<std::string>& spectrum_path,
                             std::optional<double> area, int k_max, int n_max);

CorrelationSeries run_correlate(const RunContext& ctx, const std::string& u, const std::string& v);

///
/// With a second, independent series of the same correlation the inversion
/// runs on their mean and the singular value cutoff is set from the noise
/// realisation (half their difference) instead of options.sv_threshold.
///
ModeSet run_invert(const RunContext& ctx, const std::string& series_path, const InversionOptions& options,
                   const std::optional<std::string>& pair_path = std::nullopt);

WeylFit run_weyl(const RunContext& ctx, const std::string& resonances_path, int k, double b_min, double b_max,
                 int n_ladder, double eps_exponent);

BandTestReport run_bands(const RunContext& ctx, const std::string& resonances_path, const std::string& edges_path,
                         double eps, double c0);

ConcentrationReport run_concentrate(const RunContext& ctx, const std::string& resonances_path, double d_mean,
                                    double b_min, double b_max, int n_ladder);

AnosovReport run_verify_anosov(const RunContext& ctx);

/// Full chain into the directory ctx.out; returns the number of membership violations.
std::size_t run_reproduce_fig2(const RunContext& ctx);

/// Band edges CSV (k, gamma_minus, gamma_plus, T, n_orbits, extrapolation_error, ...).
std::vector<EdgePair> read_edges_csv(const std::string& path);

} // namespace rplab

#endif // RPLAB_PIPELINES_HPP
