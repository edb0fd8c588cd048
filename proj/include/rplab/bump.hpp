#ifndef RPLAB_BUMP_HPP
#define RPLAB_BUMP_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "rplab/fuchsian.hpp"

namespace rplab
{

/// Value, Euclidean gradient (d/dx + i d/dy) and Euclidean Laplacian in disk coordinates.
struct Jet2
{
    double value = 0.0;
    cplx grad = 0.0;
    double laplacian = 0.0;
};

///
/// Gamma-invariant smooth function on the surface: the truncated Poincare
/// series
///
///   b(w) = sum_{gamma} exp(-d(w, gamma w0)^2 / (2 sigma^2))
///
/// over group elements of word length <= depth whose orbit points can reach
/// the polygon. Evaluation assumes w already lies in the fundamental polygon.
///
class PoincareBump
{
public:
    PoincareBump() = default;
    PoincareBump(const FuchsianGroup& group, cplx centre, double width, int depth);

    double width() const
    {
        return width_;
    }
    cplx centre() const
    {
        return centre_;
    }
    int depth() const
    {
        return depth_;
    }
    std::size_t terms() const
    {
        return points_.size();
    }

    double value(cplx w) const;
    Jet2 jet(cplx w) const;

    //
    // Mean over hyperbolic area of the full (untruncated) Poincare series,
    // 2 pi int_0^inf g(rho) sinh(rho) d rho / area.
    //
    double area_mean(double area) const;

private:
    static constexpr int grid_cells = 48;

    std::span<const std::uint32_t> candidates(cplx w) const;

    cplx centre_ = 0.0;
    double width_ = 1.0;
    int depth_ = 0;
    double cosh_cutoff_ = 1.0;
    std::vector<cplx> points_;
    std::vector<double> scale_; // 2 / (1 - |a|^2)
    double grid_half_ = 0.0;
    double cell_size_ = 1.0;
    std::vector<std::size_t> cell_start_;
    std::vector<std::uint32_t> cell_terms_;
    std::vector<std::uint32_t> all_terms_;
};

} // namespace rplab

#endif // RPLAB_BUMP_HPP
