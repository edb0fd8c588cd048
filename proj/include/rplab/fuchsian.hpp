#ifndef RPLAB_FUCHSIAN_HPP
#define RPLAB_FUCHSIAN_HPP

///
/// \file fuchsian.hpp
///
/// Co-compact Fuchsian groups given by side pairings of a Dirichlet polygon
/// centred at the origin of the Poincare disk (i in the half-plane).
///

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "rplab/hyperbolic.hpp"

namespace rplab
{

/// A reduced word in the generators; letters index FuchsianGroup::generators.
using Word = std::vector<int>;

class FuchsianGroup
{
public:
    //
    // @generators side-pairing matrices in SL(2,R); generator inverse(k) must
    // be the inverse of generator k.
    // @inverse    index of the inverse letter of each generator.
    //
    FuchsianGroup(std::vector<Mat2> generators, std::vector<int> inverse);

    /// Genus-2 Bolza surface: regular octagon, angles pi/4, opposite sides paired.
    static FuchsianGroup bolza();

    std::size_t size() const
    {
        return gens_.size();
    }

    const Mat2& generator(int k) const
    {
        return gens_[static_cast<std::size_t>(k)];
    }

    int inverse(int k) const
    {
        return inv_[static_cast<std::size_t>(k)];
    }

    /// Disk image of the origin under generator k (centre of the neighbouring tile).
    cplx neighbour_centre(int k) const
    {
        return centres_[static_cast<std::size_t>(k)];
    }

    /// Hyperbolic area of the fundamental polygon (Gauss-Bonnet).
    double area() const
    {
        return area_;
    }

    /// Largest hyperbolic distance from the origin to a point of the polygon.
    double circumradius() const
    {
        return circumradius_;
    }

    /// Largest residual |det g - 1| over the generators.
    double determinant_residual() const;

    /// True iff the disk point lies in the closed Dirichlet polygon.
    bool contains(cplx w, double tol = 1e-12) const;

    //
    // Index of the pairing generator whose inverse moves `w` closer to the
    // origin, or -1 if w is already in the polygon. Ties are broken by
    // generator index order.
    //
    int exit_side(cplx w) const;

    //
    // Left-multiply g by generator inverses until its base point g.i lies in
    // the polygon. Returns the number of generator applications; the
    // accumulated element is multiplied into `applied` when given.
    //
    int reduce(Mat2& g, Mat2* applied = nullptr) const;

    /// Matrix of a word (product of generators, left to right).
    Mat2 evaluate(std::span<const int> word) const;

    //
    // Distinct group elements (up to sign) represented by reduced words of
    // length <= max_length, identity first.
    //
    std::vector<Mat2> elements_up_to(int max_length) const;

    //
    // Cyclically reduced words of length 1..max_length, one per class under
    // cyclic rotation and inversion.
    //
    std::vector<Word> primitive_cyclic_words(int max_length) const;

private:
    std::vector<Mat2> gens_;
    std::vector<Mat2> gens_inv_;
    std::vector<int> inv_;
    std::vector<cplx> centres_;
    // Coefficients of |w - c_k|^2 / (1 - |c_k|^2) for the Dirichlet tests.
    std::vector<double> centre_scale_;
    double area_ = 0.0;
    double circumradius_ = 0.0;
};

///
/// Closed geodesic of a hyperbolic element: a matrix representative g on its
/// axis with g^{-1} gamma g = +-diag(e^{l/2}, e^{-l/2}), and the length l.
///
struct ClosedGeodesic
{
    Word word;
    Mat2 element;
    Mat2 frame;
    double length = 0.0;
};

/// Throws if `gamma` is not hyperbolic (|trace| <= 2).
ClosedGeodesic closed_geodesic(const Mat2& gamma);

/// Closed geodesics for primitive words up to the given length, sorted by length.
std::vector<ClosedGeodesic> closed_geodesics(const FuchsianGroup& group, int max_word_length,
                                             std::size_t max_count);

} // namespace rplab

#endif // RPLAB_FUCHSIAN_HPP
