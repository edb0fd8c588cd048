#include "rplab/bump.hpp"

#include <cmath>

#include "rplab/error.hpp"

namespace rplab
{

namespace
{

// s(q) = acosh(q) / sqrt(q^2 - 1) and its derivative, smooth through q = 1.
inline void acosh_ratio(double q, double& s, double& ds)
{
    const double e = q - 1.0;
    if (e < 1e-5)
    {
        s = 1.0 - e / 3.0 + 2.0 * e * e / 15.0;
        ds = -1.0 / 3.0 + 4.0 * e / 15.0;
        return;
    }
    const double r = std::sqrt(q * q - 1.0);
    s = std::acosh(q) / r;
    ds = (1.0 - q * s) / (r * r);
}

// Exponent below which a Gaussian term is dropped: exp(-39) ~ 1e-17.
constexpr double drop_exponent = 39.0;

} // namespace

PoincareBump::PoincareBump(const FuchsianGroup& group, cplx centre, double width, int depth)
    : centre_(centre), width_(width), depth_(depth)
{
    if (!(width > 0.0))
    {
        throw Error(ErrorKind::InvalidConfig, "bump width must be positive");
    }
    if (std::norm(centre) >= 1.0)
    {
        throw Error(ErrorKind::InvalidConfig, "bump centre must lie in the unit disk");
    }
    const double d_cut = width * std::sqrt(2.0 * drop_exponent);
    cosh_cutoff_ = std::cosh(d_cut);
    // Margin covers stage points slightly outside the polygon.
    const double reach = group.circumradius() + d_cut + 0.5;
    const cplx centre_h = to_half_plane(centre);
    for (const Mat2& g : group.elements_up_to(depth))
    {
        const cplx a = to_disk(mobius(g, centre_h));
        if (dist_disk(a, 0.0) <= reach)
        {
            points_.push_back(a);
            scale_.push_back(2.0 / (1.0 - std::norm(a)));
        }
    }

    // Cell lists: for each square of a Cartesian grid over the disk, the
    // terms that can pass the cutoff somewhere in the square. Terms keep
    // their global order, so sums are identical to the full loop.
    grid_half_ = std::tanh(0.5 * reach);
    cell_size_ = 2.0 * grid_half_ / grid_cells;
    cell_start_.assign(1, 0);
    for (int iy = 0; iy < grid_cells; ++iy)
    {
        for (int ix = 0; ix < grid_cells; ++ix)
        {
            const double x0 = -grid_half_ + ix * cell_size_;
            const double y0 = -grid_half_ + iy * cell_size_;
            const cplx c(x0 + 0.5 * cell_size_, y0 + 0.5 * cell_size_);
            double rad = 0.0;
            if (std::norm(c) < 1.0)
            {
                for (int e = 0; e <= 64; ++e)
                {
                    const double s = e / 64.0 * cell_size_;
                    for (const cplx b : {cplx(x0 + s, y0), cplx(x0 + s, y0 + cell_size_), cplx(x0, y0 + s),
                                         cplx(x0 + cell_size_, y0 + s)})
                    {
                        rad = std::norm(b) < 1.0 ? std::max(rad, dist_disk(b, c)) : 1e300;
                    }
                }
            }
            else
            {
                rad = 1e300;
            }
            for (std::size_t j = 0; j < points_.size(); ++j)
            {
                if (rad > 1e299 || dist_disk(points_[j], c) <= d_cut + rad * 1.01 + 1e-6)
                {
                    cell_terms_.push_back(static_cast<std::uint32_t>(j));
                }
            }
            cell_start_.push_back(cell_terms_.size());
        }
    }
    all_terms_.resize(points_.size());
    for (std::size_t j = 0; j < points_.size(); ++j)
    {
        all_terms_[j] = static_cast<std::uint32_t>(j);
    }
}

std::span<const std::uint32_t> PoincareBump::candidates(cplx w) const
{
    const int ix = static_cast<int>(std::floor((w.real() + grid_half_) / cell_size_));
    const int iy = static_cast<int>(std::floor((w.imag() + grid_half_) / cell_size_));
    if (ix < 0 || iy < 0 || ix >= grid_cells || iy >= grid_cells)
    {
        return all_terms_;
    }
    const auto cell = static_cast<std::size_t>(iy * grid_cells + ix);
    return {cell_terms_.data() + cell_start_[cell], cell_start_[cell + 1] - cell_start_[cell]};
}

double PoincareBump::value(cplx w) const
{
    const double Q = 1.0 - std::norm(w);
    const double inv_2s2 = 0.5 / (width_ * width_);
    double sum = 0.0;
    for (const std::uint32_t j : candidates(w))
    {
        const double q = 1.0 + scale_[j] * std::norm(w - points_[j]) / Q;
        if (q > cosh_cutoff_)
        {
            continue;
        }
        const double d = std::acosh(q);
        sum += std::exp(-d * d * inv_2s2);
    }
    return sum;
}

Jet2 PoincareBump::jet(cplx w) const
{
    const double Q = 1.0 - std::norm(w);
    const double inv_s2 = 1.0 / (width_ * width_);
    const double w2 = std::norm(w);
    Jet2 out;
    for (const std::uint32_t j : candidates(w))
    {
        const cplx diff = w - points_[j];
        const double P = std::norm(diff);
        const double A = scale_[j];
        const double q = 1.0 + A * P / Q;
        if (q > cosh_cutoff_)
        {
            continue;
        }
        const double d = std::acosh(q);
        const double G = std::exp(-0.5 * d * d * inv_s2);
        double s = 0.0;
        double ds = 0.0;
        acosh_ratio(q, s, ds);
        const double f1 = -G * s * inv_s2;
        const double f2 = (G * s * s * inv_s2 - G * ds) * inv_s2;

        const cplx grad_q = A * (2.0 * diff / Q + 2.0 * P * w / (Q * Q));
        const double lap_q =
            A * (4.0 / Q + 8.0 * (diff.real() * w.real() + diff.imag() * w.imag()) / (Q * Q) +
                 4.0 * P / (Q * Q) + 8.0 * P * w2 / (Q * Q * Q));

        out.value += G;
        out.grad += f1 * grad_q;
        out.laplacian += f2 * std::norm(grad_q) + f1 * lap_q;
    }
    return out;
}

double PoincareBump::area_mean(double area) const
{
    // Simpson's rule on [0, rho_max]; the integrand is negligible beyond.
    const double rho_max = width_ * std::sqrt(2.0 * drop_exponent) + 1.0;
    const int n = 20000;
    const double h = rho_max / n;
    double acc = 0.0;
    for (int i = 0; i <= n; ++i)
    {
        const double rho = i * h;
        const double f = std::exp(-0.5 * rho * rho / (width_ * width_)) * std::sinh(rho);
        const double wgt = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        acc += wgt * f;
    }
    return 2.0 * pi * acc * h / 3.0 / area;
}

} // namespace rplab
