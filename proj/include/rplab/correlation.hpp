#ifndef RPLAB_CORRELATION_HPP
#define RPLAB_CORRELATION_HPP

///
/// \file correlation.hpp
///
/// Dynamical correlations C(t) = int_M u (v o phi_{-t}) dx by Liouville Monte
/// Carlo, and the residual of their finite exponential expansion.
///

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "rplab/flow_model.hpp"
#include "rplab/harmonic_inversion.hpp"

namespace rplab
{

///
/// Smooth observable on M as a linear combination of basis functions:
///   one        1
///   bump       b(pi(x))
///   bump0      b - <b>       (Liouville mean removed)
///   flow_bump  X b           (derivative along the flow; mean zero)
/// Text form: "bump0" or "bump:1,one:-0.25".
///
class Observable
{
public:
    enum class Basis
    {
        One,
        Bump,
        Bump0,
        FlowBump,
    };

    static Observable parse(const std::string& text);

    /// Bind to a model: fixes the mean used by bump0.
    void bind(const FlowModel& model);

    double operator()(const FlowModel& model, cplx w, double theta) const;

    const std::string& text() const
    {
        return text_;
    }
    bool mean_zero() const;

    const std::vector<std::pair<Basis, double>>& terms() const
    {
        return terms_;
    }

private:
    std::vector<std::pair<Basis, double>> terms_;
    std::string text_;
    double bump_mean_ = 0.0;
    bool needs_gradient_ = false;
};

/// Liouville mean of the bump: exact area integral at epsilon = 0, Monte Carlo otherwise.
double bump_mean(const FlowModel& model);

struct CorrelationSeries
{
    double dt = 0.0;
    std::vector<double> values;
    std::vector<double> std_error;
    std::string u;
    std::string v;
    std::size_t n_samples = 0;

    double time(std::size_t m) const
    {
        return static_cast<double>(m) * dt;
    }
};

CorrelationSeries correlation_series(const FlowModel& model, const Observable& u, const Observable& v, double dt,
                                     std::size_t n_points, std::size_t n_samples, std::uint64_t seed,
                                     int threads = 1);

struct ExpansionReport
{
    double slope = 0.0;      // fitted d log R / dt
    double fit_error = 0.0;  // standard error of the slope
    std::size_t n_fit = 0;   // points above the noise floor
    bool vacuous = false;    // fewer than 5 points above the floor
    bool passed = false;
    double max_residual = 0.0;
};

///
/// R(t) = |C(t) - sum_j a_j e^{z_j t}|, slope of log R over points above the
/// noise floor max(noise_factor * stderr, 1e-12 max|C|). Passes iff
/// slope <= gamma1_plus + eps + fit_error.
///
ExpansionReport expansion_residual(const CorrelationSeries& series, const std::vector<Mode>& modes,
                                   double gamma1_plus, double eps, double noise_factor = 2.0);

///
/// Two independent estimates of the same correlation (different seeds):
/// their mean, and half their difference, which is a pure-noise series with
/// the error statistics of the mean.
///
struct SplitSeries
{
    CorrelationSeries mean;
    std::vector<double> noise;
};

SplitSeries combine_independent(const CorrelationSeries& a, const CorrelationSeries& b);

void write_series_csv(const std::string& path, const CorrelationSeries& series);
CorrelationSeries read_series_csv(const std::string& path);

std::string modes_to_json(const ModeSet& modes, double dt);

} // namespace rplab

#endif // RPLAB_CORRELATION_HPP
