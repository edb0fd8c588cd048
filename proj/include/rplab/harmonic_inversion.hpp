#ifndef RPLAB_HARMONIC_INVERSION_HPP
#define RPLAB_HARMONIC_INVERSION_HPP

///
/// \file harmonic_inversion.hpp
///
/// Fit of a sampled real signal c_m = c(m dt) by a sum of damped complex
/// exponentials sum_j a_j exp(z_j m dt) with the matrix-pencil method on the
/// right singular subspace of a Hankel matrix.
///

#include <vector>

#include "rplab/hyperbolic.hpp"

namespace rplab
{

struct Mode
{
    cplx z;
    cplx amplitude;
    bool aliased = false; // |Im z| close to the Nyquist bound pi / dt
};

struct ModeSet
{
    std::vector<Mode> modes;          // sorted by Re z descending, then Im z descending
    std::vector<double> singular_values;
    int rank = 0;
    double residual_norm = 0.0;       // || c - fit ||_2
    double signal_norm = 0.0;         // || c ||_2
    bool aliasing_warning = false;
};

struct InversionOptions
{
    int max_modes = 40;
    double sv_threshold = 1e-3; // relative to the largest singular value
    int max_columns = 501;      // Hankel columns (pencil length + 1)
};

ModeSet harmonic_inversion(const std::vector<double>& values, double dt, const InversionOptions& options = {});

/// Singular values of the Hankel matrix built by harmonic_inversion, descending.
std::vector<double> hankel_singular_values(const std::vector<double>& values, int max_columns = 501);

///
/// Relative singular value cutoff `factor` times the largest Hankel singular
/// value of a noise realisation (same length and error statistics as the
/// signal), so that only components standing above the noise are kept.
///
double noise_sv_threshold(const std::vector<double>& signal, const std::vector<double>& noise, double factor = 1.5,
                          int max_columns = 501);

/// Re( sum_j a_j exp(z_j t) ).
double evaluate_modes(const std::vector<Mode>& modes, double t);

/// Least-squares complex amplitudes for fixed exponents z_j.
std::vector<cplx> fit_amplitudes(const std::vector<double>& values, double dt, const std::vector<cplx>& z);

} // namespace rplab

#endif // RPLAB_HARMONIC_INVERSION_HPP
