#include "rplab/liouville.hpp"

#include <cmath>

#include "rplab/error.hpp"
#include "rplab/parallel.hpp"

namespace rplab
{

namespace
{

constexpr std::size_t block_size = 4096;

} // namespace

SampleRng sample_rng(std::uint64_t seed, std::uint64_t index)
{
    // Hash the seed, then offset by the index: distinct streams per index.
    SampleRng mix(seed);
    const std::uint64_t base = mix();
    SampleRng mix_index(base ^ index);
    return SampleRng(mix_index() + index);
}

cplx sample_polygon_point(const FuchsianGroup& group, SampleRng& rng)
{
    // Uniform in the hyperbolic disk of radius R about 0, kept if inside the polygon.
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double cosh_r = std::cosh(group.circumradius());
    for (int attempt = 0; attempt < 10000; ++attempt)
    {
        const double rho = std::acosh(1.0 + unif(rng) * (cosh_r - 1.0));
        const cplx w = std::tanh(0.5 * rho) * std::polar(1.0, 2.0 * pi * unif(rng));
        if (group.contains(w, 0.0))
        {
            return w;
        }
    }
    throw Error(ErrorKind::InvalidModel, "polygon sampling failed");
}

PhasePoint sample_liouville(const FlowModel& model, std::uint64_t seed, std::uint64_t index)
{
    SampleRng rng = sample_rng(seed, index);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (;;)
    {
        const cplx w = sample_polygon_point(*model.group, rng);
        const double theta = 2.0 * pi * unif(rng);
        // Conformal factor e^{2 psi} by rejection against its upper bound.
        if (model.epsilon == 0.0 || unif(rng) < std::exp(2.0 * (model.psi(w) - model.psi_max)))
        {
            return PhasePoint::from_disk(w, theta);
        }
    }
}

double conformal_area(const FlowModel& model, std::size_t n_samples, std::uint64_t seed)
{
    const std::size_t n_blocks = (n_samples + block_size - 1) / block_size;
    std::vector<double> sums(n_blocks, 0.0);
    parallel_for(n_blocks, 1, [&](std::size_t b) {
        double s = 0.0;
        for (std::size_t i = b * block_size; i < std::min(n_samples, (b + 1) * block_size); ++i)
        {
            SampleRng rng = sample_rng(seed, i);
            s += std::exp(2.0 * model.psi(sample_polygon_point(*model.group, rng)));
        }
        sums[b] = s;
    });
    double total = 0.0;
    for (double s : sums)
    {
        total += s;
    }
    return model.group->area() * total / static_cast<double>(n_samples);
}

MeanEstimate mean_with_error(const std::vector<double>& v)
{
    MeanEstimate out;
    out.n = v.size();
    if (v.empty())
    {
        return out;
    }
    const double f0 = v.front();
    double s1 = 0.0;
    double s2 = 0.0;
    for (double x : v)
    {
        s1 += x - f0;
        s2 += (x - f0) * (x - f0);
    }
    const auto n = static_cast<double>(v.size());
    const double d = s1 / n;
    out.mean = f0 + d;
    if (v.size() > 1)
    {
        out.std_error = std::sqrt(std::max(0.0, (s2 - n * d * d) / (n - 1.0)) / n);
    }
    return out;
}

MeanEstimate space_average(const FlowModel& model, const PhaseFunction& f, std::size_t n_samples,
                           std::uint64_t seed, int threads)
{
    if (n_samples == 0)
    {
        throw Error(ErrorKind::InvalidConfig, "space_average needs at least one sample");
    }
    const double f0 = f(sample_liouville(model, seed, 0));
    const std::size_t n_blocks = (n_samples + block_size - 1) / block_size;
    std::vector<double> s1(n_blocks, 0.0);
    std::vector<double> s2(n_blocks, 0.0);
    parallel_for(n_blocks, threads, [&](std::size_t b) {
        for (std::size_t i = b * block_size; i < std::min(n_samples, (b + 1) * block_size); ++i)
        {
            const double d = f(sample_liouville(model, seed, i)) - f0;
            s1[b] += d;
            s2[b] += d * d;
        }
    });
    double t1 = 0.0;
    double t2 = 0.0;
    for (std::size_t b = 0; b < n_blocks; ++b)
    {
        t1 += s1[b];
        t2 += s2[b];
    }
    const auto n = static_cast<double>(n_samples);
    MeanEstimate out;
    out.n = n_samples;
    out.mean = f0 + t1 / n;
    if (n_samples > 1)
    {
        const double d = t1 / n;
        out.std_error = std::sqrt(std::max(0.0, (t2 - n * d * d) / (n - 1.0)) / n);
    }
    return out;
}

} // namespace rplab
