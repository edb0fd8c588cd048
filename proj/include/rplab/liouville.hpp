#ifndef RPLAB_LIOUVILLE_HPP
#define RPLAB_LIOUVILLE_HPP

///
/// \file liouville.hpp
///
/// Sampling of the Liouville measure on M: area measure of the (conformal)
/// metric on the fundamental polygon times the uniform angle.
///

#include <cstdint>
#include <functional>
#include <random>

#include "rplab/flow_model.hpp"

namespace rplab
{

///
/// SplitMix64 generator. Cheap to seed, so every sample gets its own stream
/// (a Mersenne twister spends more time seeding than sampling here).
///
class SampleRng
{
public:
    using result_type = std::uint64_t;

    explicit SampleRng(std::uint64_t state) : state_(state)
    {
    }

    static constexpr result_type min()
    {
        return 0;
    }
    static constexpr result_type max()
    {
        return ~result_type{0};
    }

    result_type operator()()
    {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t state_;
};

/// Independent generator for sample `index` of stream `seed`.
SampleRng sample_rng(std::uint64_t seed, std::uint64_t index);

/// Base point uniform for the hyperbolic area measure on the polygon.
cplx sample_polygon_point(const FuchsianGroup& group, SampleRng& rng);

///
/// Liouville-distributed point number `index` of the stream `seed`. Each index
/// uses its own generator, so samples do not depend on evaluation order.
///
PhasePoint sample_liouville(const FlowModel& model, std::uint64_t seed, std::uint64_t index);

/// Area of the surface for the metric e^{2 psi} g_hyp (Monte Carlo).
double conformal_area(const FlowModel& model, std::size_t n_samples, std::uint64_t seed);

struct MeanEstimate
{
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t n = 0;
};

using PhaseFunction = std::function<double(const PhasePoint&)>;

///
/// Liouville average of f with its Monte Carlo standard error. Block sums are
/// combined in a fixed order: the result does not depend on `threads`.
///
MeanEstimate space_average(const FlowModel& model, const PhaseFunction& f, std::size_t n_samples,
                           std::uint64_t seed, int threads = 1);

/// Mean and standard error of values v[0..n), centred on v[0] so that a
/// constant input returns that constant exactly.
MeanEstimate mean_with_error(const std::vector<double>& v);

} // namespace rplab

#endif // RPLAB_LIOUVILLE_HPP
