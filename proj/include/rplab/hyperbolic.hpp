#ifndef RPLAB_HYPERBOLIC_HPP
#define RPLAB_HYPERBOLIC_HPP

///
/// \file hyperbolic.hpp
///
/// Elementary hyperbolic geometry: SL(2,R) matrices acting on the upper
/// half-plane, the Cayley transform to the Poincare disk, and distances.
///

#include <cmath>
#include <complex>
#include <numbers>

#include <Eigen/Core>

namespace rplab
{

using cplx = std::complex<double>;
using Mat2 = Eigen::Matrix2d;

inline constexpr double pi = std::numbers::pi;
inline constexpr cplx I{0.0, 1.0};

/// Mobius action of g on the upper half-plane.
inline cplx mobius(const Mat2& g, cplx z)
{
    return (g(0, 0) * z + g(0, 1)) / (g(1, 0) * z + g(1, 1));
}

/// Cayley transform H -> D.
inline cplx to_disk(cplx z)
{
    return (z - I) / (z + I);
}

/// Inverse Cayley transform D -> H.
inline cplx to_half_plane(cplx w)
{
    return I * (1.0 + w) / (1.0 - w);
}

inline double cosh_dist_half_plane(cplx z, cplx w)
{
    return 1.0 + std::norm(z - w) / (2.0 * z.imag() * w.imag());
}

inline double cosh_dist_disk(cplx a, cplx b)
{
    return 1.0 + 2.0 * std::norm(a - b) / ((1.0 - std::norm(a)) * (1.0 - std::norm(b)));
}

inline double dist_disk(cplx a, cplx b)
{
    return std::acosh(std::max(1.0, cosh_dist_disk(a, b)));
}

/// cosh d(i, g i) = |g|_F^2 / 2 for g in SL(2,R).
inline double cosh_dist_from_origin(const Mat2& g)
{
    return 0.5 * g.squaredNorm();
}

inline Mat2 sl2_inverse(const Mat2& g)
{
    Mat2 r;
    r << g(1, 1), -g(0, 1), -g(1, 0), g(0, 0);
    return r;
}

/// Geodesic one-parameter subgroup exp(t X_e), X_e = diag(1/2, -1/2).
inline Mat2 geodesic_step(double t)
{
    Mat2 a;
    a << std::exp(0.5 * t), 0.0, 0.0, std::exp(-0.5 * t);
    return a;
}

inline Mat2 rotation(double a)
{
    Mat2 k;
    k << std::cos(a), std::sin(a), -std::sin(a), std::cos(a);
    return k;
}

/// Rescale to unit determinant (removes accumulated rounding).
inline void renormalize_det(Mat2& g)
{
    g /= std::sqrt(g.determinant());
}

/// Choose the PSL(2,R) sign representative with positive leading entry.
inline Mat2 psl_canonical(const Mat2& g)
{
    for (int i = 0; i < 4; ++i)
    {
        const double v = g.data()[i];
        if (std::abs(v) > 1e-14)
        {
            return v < 0 ? Mat2(-g) : g;
        }
    }
    return g;
}

/// Distance between two matrices as elements of PSL(2,R).
inline double psl_distance(const Mat2& a, const Mat2& b)
{
    return std::min((a - b).norm(), (a + b).norm());
}

///
/// exp(x X + y Y + w W) in the basis X = diag(1,-1)/2, Y = [[0,1],[1,0]]/2,
/// W = [[0,1],[-1,0]]/2 of sl(2,R). Uses A^2 = -det(A) I.
///
inline Mat2 sl2_exp(double x, double y, double w)
{
    Mat2 a;
    a << 0.5 * x, 0.5 * (y + w), 0.5 * (y - w), -0.5 * x;
    const double d = 0.25 * (x * x + y * y - w * w); // -det(A)
    const double r = std::sqrt(std::abs(d));
    double c = 1.0;
    double s = 1.0;
    if (r > 1e-8)
    {
        c = d > 0 ? std::cosh(r) : std::cos(r);
        s = (d > 0 ? std::sinh(r) : std::sin(r)) / r;
    }
    else
    {
        c = 1.0 + 0.5 * d;
        s = 1.0 + d / 6.0;
    }
    return c * Mat2::Identity() + s * a;
}

/// Coordinates (x, y, w) of a near-identity element, inverse of sl2_exp to first order.
inline Eigen::Vector3d sl2_coords(Mat2 m)
{
    if (m.trace() < 0)
    {
        m = -m;
    }
    return {m(0, 0) - m(1, 1), m(0, 1) + m(1, 0), m(0, 1) - m(1, 0)};
}

} // namespace rplab

#endif // RPLAB_HYPERBOLIC_HPP
