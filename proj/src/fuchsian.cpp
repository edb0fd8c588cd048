#include "rplab/fuchsian.hpp"

#include <algorithm>
#include <cassert>

#include <Eigen/Dense>

#include "rplab/error.hpp"

namespace rplab
{

namespace
{

// Largest rho with tanh(rho/2) e^{i phi} inside the polygon.
double boundary_radius(const FuchsianGroup& group, double phi, double rho_max)
{
    const cplx dir = std::polar(1.0, phi);
    double lo = 0.0;
    double hi = rho_max;
    for (int it = 0; it < 80; ++it)
    {
        const double mid = 0.5 * (lo + hi);
        if (group.contains(std::tanh(0.5 * mid) * dir, 0.0))
        {
            lo = mid;
        }
        else
        {
            hi = mid;
        }
    }
    return lo;
}

bool is_proper_power(const Word& w)
{
    const std::size_t n = w.size();
    for (std::size_t p = 1; p < n; ++p)
    {
        if (n % p != 0)
        {
            continue;
        }
        bool periodic = true;
        for (std::size_t i = p; i < n && periodic; ++i)
        {
            periodic = w[i] == w[i - p];
        }
        if (periodic)
        {
            return true;
        }
    }
    return false;
}

} // namespace

FuchsianGroup::FuchsianGroup(std::vector<Mat2> generators, std::vector<int> inverse)
    : gens_(std::move(generators)), inv_(std::move(inverse))
{
    if (gens_.size() != inv_.size() || gens_.empty())
    {
        throw Error(ErrorKind::InvalidModel, "generator and inverse tables differ in size");
    }
    gens_inv_.reserve(gens_.size());
    centres_.reserve(gens_.size());
    centre_scale_.reserve(gens_.size());
    for (const auto& g : gens_)
    {
        gens_inv_.push_back(sl2_inverse(g));
        const cplx c = to_disk(mobius(g, I));
        centres_.push_back(c);
        centre_scale_.push_back(1.0 / (1.0 - std::norm(c)));
    }
    for (std::size_t k = 0; k < gens_.size(); ++k)
    {
        const auto j = static_cast<std::size_t>(inv_[k]);
        if (j >= gens_.size() || psl_distance(gens_[j] * gens_[k], Mat2::Identity()) > 1e-10)
        {
            throw Error(ErrorKind::InvalidModel, "inverse table does not match generators");
        }
    }

    // Polygon shape by ray casting. Vertex directions are located where the
    // exit side changes; area = int (cosh rho(phi) - 1) dphi by Simpson's rule
    // on each side, where rho(phi) is smooth.
    double rho_max = 0.0;
    for (const auto& c : centres_)
    {
        rho_max = std::max(rho_max, 2.0 * std::atanh(std::abs(c)));
    }
    rho_max *= 2.0;
    auto side_at = [&](double phi) {
        const double rho = boundary_radius(*this, phi, rho_max);
        return exit_side(std::tanh(0.5 * (rho + 1e-6)) * std::polar(1.0, phi));
    };
    const int n_rays = 4096;
    std::vector<double> vertices;
    int prev = side_at(0.0);
    for (int i = 1; i <= n_rays; ++i)
    {
        const double b = 2.0 * pi * i / n_rays;
        const int cur = side_at(b);
        if (cur != prev)
        {
            double lo = 2.0 * pi * (i - 1) / n_rays;
            double hi = b;
            for (int it = 0; it < 60; ++it)
            {
                const double mid = 0.5 * (lo + hi);
                (side_at(mid) == prev ? lo : hi) = mid;
            }
            vertices.push_back(0.5 * (lo + hi));
        }
        prev = cur;
    }
    if (vertices.size() < 3)
    {
        throw Error(ErrorKind::InvalidModel, "fundamental polygon has fewer than three vertices");
    }
    area_ = 0.0;
    for (std::size_t v = 0; v < vertices.size(); ++v)
    {
        const double a = vertices[v];
        const double b = v + 1 < vertices.size() ? vertices[v + 1] : vertices[0] + 2.0 * pi;
        circumradius_ = std::max(circumradius_, boundary_radius(*this, a, rho_max));
        const int n = 4096;
        const double h = (b - a) / n;
        double acc = 0.0;
        for (int i = 0; i <= n; ++i)
        {
            const double f = std::cosh(boundary_radius(*this, a + i * h, rho_max)) - 1.0;
            acc += (i == 0 || i == n ? 1.0 : (i % 2 ? 4.0 : 2.0)) * f;
        }
        area_ += acc * h / 3.0;
    }
}

FuchsianGroup FuchsianGroup::bolza()
{
    // SU(1,1) pairings h_k = [[a, b_k], [conj b_k, a]], conjugated to SL(2,R)
    // through the Cayley transform.
    const double a = 1.0 + std::sqrt(2.0);
    const double b = std::sqrt(2.0 + 2.0 * std::sqrt(2.0));
    Eigen::Matrix2cd cayley;
    cayley << 1.0, -I, 1.0, I;
    const Eigen::Matrix2cd cayley_inv = cayley.inverse();

    std::vector<Mat2> gens;
    std::vector<int> inv;
    for (int k = 0; k < 8; ++k)
    {
        const cplx bk = b * std::polar(1.0, k * pi / 4.0);
        Eigen::Matrix2cd h;
        h << a, bk, std::conj(bk), a;
        const Eigen::Matrix2cd g = cayley_inv * h * cayley;
        assert(g.imag().norm() < 1e-12);
        gens.push_back(g.real());
        inv.push_back((k + 4) % 8);
    }
    return FuchsianGroup(std::move(gens), std::move(inv));
}

double FuchsianGroup::determinant_residual() const
{
    double r = 0.0;
    for (const auto& g : gens_)
    {
        r = std::max(r, std::abs(g.determinant() - 1.0));
    }
    return r;
}

bool FuchsianGroup::contains(cplx w, double tol) const
{
    const double r2 = std::norm(w);
    if (r2 >= 1.0)
    {
        return false;
    }
    for (std::size_t k = 0; k < centres_.size(); ++k)
    {
        if (r2 - std::norm(w - centres_[k]) * centre_scale_[k] > tol)
        {
            return false;
        }
    }
    return true;
}

int FuchsianGroup::exit_side(cplx w) const
{
    const double r2 = std::norm(w);
    int best = -1;
    double best_gain = 1e-13;
    for (std::size_t k = 0; k < centres_.size(); ++k)
    {
        const double gain = r2 - std::norm(w - centres_[k]) * centre_scale_[k];
        if (gain > best_gain * (1.0 + 1e-9))
        {
            best = static_cast<int>(k);
            best_gain = gain;
        }
    }
    return best;
}

int FuchsianGroup::reduce(Mat2& g, Mat2* applied) const
{
    int count = 0;
    for (;;)
    {
        const int k = exit_side(to_disk(mobius(g, I)));
        if (k < 0)
        {
            return count;
        }
        g = gens_inv_[static_cast<std::size_t>(k)] * g;
        if (applied)
        {
            *applied = gens_inv_[static_cast<std::size_t>(k)] * (*applied);
        }
        ++count;
        if (count > 64)
        {
            throw Error(ErrorKind::StepTooLarge, "fundamental-domain reduction did not terminate");
        }
    }
}

Mat2 FuchsianGroup::evaluate(std::span<const int> word) const
{
    Mat2 g = Mat2::Identity();
    for (int k : word)
    {
        g = g * gens_[static_cast<std::size_t>(k)];
    }
    return g;
}

std::vector<Mat2> FuchsianGroup::elements_up_to(int max_length) const
{
    std::vector<Mat2> out{Mat2::Identity()};
    std::vector<std::pair<Mat2, int>> frontier{{Mat2::Identity(), -1}};
    for (int len = 1; len <= max_length; ++len)
    {
        std::vector<std::pair<Mat2, int>> next;
        for (const auto& [g, last] : frontier)
        {
            for (std::size_t k = 0; k < gens_.size(); ++k)
            {
                if (last >= 0 && inv_[static_cast<std::size_t>(last)] == static_cast<int>(k))
                {
                    continue;
                }
                Mat2 h = g * gens_[k];
                next.emplace_back(h, static_cast<int>(k));
                const bool seen = std::any_of(out.begin(), out.end(), [&](const Mat2& e) {
                    return psl_distance(e, h) < 1e-8 * (1.0 + h.norm());
                });
                if (!seen)
                {
                    out.push_back(h);
                }
            }
        }
        frontier = std::move(next);
    }
    return out;
}

std::vector<Word> FuchsianGroup::primitive_cyclic_words(int max_length) const
{
    const int n_gen = static_cast<int>(gens_.size());
    std::vector<Word> out;
    Word w;

    auto inverse_word = [&](const Word& v) {
        Word r(v.rbegin(), v.rend());
        for (int& x : r)
        {
            x = inv_[static_cast<std::size_t>(x)];
        }
        return r;
    };
    auto is_canonical = [&](const Word& v) {
        const std::size_t n = v.size();
        for (const Word& base : {v, inverse_word(v)})
        {
            for (std::size_t s = 0; s < n; ++s)
            {
                Word rot(n);
                for (std::size_t i = 0; i < n; ++i)
                {
                    rot[i] = base[(i + s) % n];
                }
                if (rot < v)
                {
                    return false;
                }
            }
        }
        return true;
    };

    // Depth-first enumeration of reduced words.
    auto extend = [&](auto&& self, int len) -> void {
        if (!w.empty())
        {
            const bool cyclic = w.size() == 1 || inv_[static_cast<std::size_t>(w.back())] != w.front();
            if (cyclic && !is_proper_power(w) && is_canonical(w))
            {
                out.push_back(w);
            }
        }
        if (static_cast<int>(w.size()) == len)
        {
            return;
        }
        for (int k = 0; k < n_gen; ++k)
        {
            if (!w.empty() && inv_[static_cast<std::size_t>(w.back())] == k)
            {
                continue;
            }
            w.push_back(k);
            self(self, len);
            w.pop_back();
        }
    };
    extend(extend, max_length);
    return out;
}

ClosedGeodesic closed_geodesic(const Mat2& gamma_in)
{
    Mat2 gamma = gamma_in;
    double tr = gamma.trace();
    if (std::abs(tr) <= 2.0 + 1e-12)
    {
        throw Error(ErrorKind::InvalidModel, "element is not hyperbolic");
    }
    if (tr < 0)
    {
        gamma = -gamma;
        tr = -tr;
    }
    const double disc = std::sqrt(tr * tr - 4.0);
    const double lp = 0.5 * (tr + disc);
    const double lm = 1.0 / lp;

    auto eigvec = [&](double lam) {
        Eigen::Vector2d v1(gamma(0, 1), lam - gamma(0, 0));
        Eigen::Vector2d v2(lam - gamma(1, 1), gamma(1, 0));
        return v1.norm() > v2.norm() ? v1 : v2;
    };
    Eigen::Vector2d vp = eigvec(lp);
    Eigen::Vector2d vm = eigvec(lm);
    Mat2 frame;
    frame.col(0) = vp;
    frame.col(1) = vm;
    double det = frame.determinant();
    if (det < 0)
    {
        frame.col(1) = -vm;
        det = -det;
    }
    frame /= std::sqrt(det);

    ClosedGeodesic out;
    out.element = gamma_in;
    out.frame = frame;
    out.length = 2.0 * std::log(lp);
    return out;
}

std::vector<ClosedGeodesic> closed_geodesics(const FuchsianGroup& group, int max_word_length,
                                             std::size_t max_count)
{
    std::vector<ClosedGeodesic> out;
    for (auto& w : group.primitive_cyclic_words(max_word_length))
    {
        const Mat2 g = group.evaluate(w);
        if (std::abs(g.trace()) <= 2.0 + 1e-9)
        {
            continue;
        }
        ClosedGeodesic c = closed_geodesic(g);
        c.word = std::move(w);
        out.push_back(std::move(c));
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const ClosedGeodesic& a, const ClosedGeodesic& b) { return a.length < b.length; });
    if (out.size() > max_count)
    {
        out.resize(max_count);
    }
    return out;
}

} // namespace rplab
