#include "rplab/harmonic_inversion.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "rplab/error.hpp"

namespace rplab
{

namespace
{

// Hankel matrix rows x cols with cols <= rows.
Eigen::MatrixXd hankel(const std::vector<double>& values, int max_columns)
{
    const auto n = static_cast<Eigen::Index>(values.size());
    const Eigen::Index cols = std::min<Eigen::Index>(max_columns, n / 2 + 1);
    const Eigen::Index rows = n - cols + 1;
    Eigen::MatrixXd h(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
    {
        for (Eigen::Index j = 0; j < cols; ++j)
        {
            h(i, j) = values[static_cast<std::size_t>(i + j)];
        }
    }
    return h;
}

} // namespace

std::vector<double> hankel_singular_values(const std::vector<double>& values, int max_columns)
{
    if (values.size() < 2)
    {
        return {};
    }
    const Eigen::BDCSVD<Eigen::MatrixXd> svd(hankel(values, max_columns));
    const Eigen::VectorXd& sv = svd.singularValues();
    return {sv.data(), sv.data() + sv.size()};
}

double noise_sv_threshold(const std::vector<double>& signal, const std::vector<double>& noise, double factor,
                          int max_columns)
{
    if (signal.size() != noise.size())
    {
        throw Error(ErrorKind::InvalidConfig, "signal and noise series differ in length");
    }
    const std::vector<double> s = hankel_singular_values(signal, max_columns);
    const std::vector<double> n = hankel_singular_values(noise, max_columns);
    if (s.empty() || s[0] == 0.0)
    {
        throw Error(ErrorKind::InvalidConfig, "zero signal");
    }
    return std::min(factor * n[0] / s[0], 0.999);
}

std::vector<cplx> fit_amplitudes(const std::vector<double>& values, double dt, const std::vector<cplx>& z)
{
    const auto n = static_cast<Eigen::Index>(values.size());
    const auto r = static_cast<Eigen::Index>(z.size());
    if (r == 0)
    {
        return {};
    }
    Eigen::MatrixXcd vand(n, r);
    for (Eigen::Index j = 0; j < r; ++j)
    {
        for (Eigen::Index m = 0; m < n; ++m)
        {
            vand(m, j) = std::exp(z[static_cast<std::size_t>(j)] * (static_cast<double>(m) * dt));
        }
    }
    Eigen::VectorXcd rhs(n);
    for (Eigen::Index m = 0; m < n; ++m)
    {
        rhs(m) = values[static_cast<std::size_t>(m)];
    }
    const Eigen::VectorXcd a = vand.colPivHouseholderQr().solve(rhs);
    return {a.data(), a.data() + r};
}

double evaluate_modes(const std::vector<Mode>& modes, double t)
{
    cplx s = 0.0;
    for (const auto& m : modes)
    {
        s += m.amplitude * std::exp(m.z * t);
    }
    return s.real();
}

ModeSet harmonic_inversion(const std::vector<double>& values, double dt, const InversionOptions& options)
{
    if (!(dt > 0.0))
    {
        throw Error(ErrorKind::InvalidConfig, "sampling step must be positive");
    }
    if (options.max_modes < 1 || !(options.sv_threshold > 0.0 && options.sv_threshold < 1.0))
    {
        throw Error(ErrorKind::InvalidConfig, "invalid inversion options");
    }
    const auto n = static_cast<Eigen::Index>(values.size());
    if (n < 4 * options.max_modes)
    {
        throw Error(ErrorKind::InvalidConfig, "series too short for harmonic inversion");
    }
    ModeSet out;
    for (double v : values)
    {
        out.signal_norm += v * v;
    }
    out.signal_norm = std::sqrt(out.signal_norm);
    out.residual_norm = out.signal_norm;
    if (out.signal_norm == 0.0)
    {
        return out;
    }

    const Eigen::MatrixXd h = hankel(values, options.max_columns);
    const Eigen::Index cols = h.cols();
    Eigen::BDCSVD<Eigen::MatrixXd> svd(h, Eigen::ComputeThinV);
    const Eigen::VectorXd& sv = svd.singularValues();
    out.singular_values.assign(sv.data(), sv.data() + sv.size());
    const double smax = sv(0);
    int rank = 0;
    while (rank < sv.size() && rank < options.max_modes && rank < cols - 1 && sv(rank) >= options.sv_threshold * smax)
    {
        ++rank;
    }
    out.rank = rank;
    if (rank == 0)
    {
        return out;
    }

    // Shift invariance of the signal subspace: V[1:] = V[:-1] Psi.
    const Eigen::MatrixXd v = svd.matrixV().leftCols(rank);
    const Eigen::MatrixXd v0 = v.topRows(cols - 1);
    const Eigen::MatrixXd v1 = v.bottomRows(cols - 1);
    const Eigen::MatrixXd psi = v0.completeOrthogonalDecomposition().solve(v1);
    Eigen::EigenSolver<Eigen::MatrixXd> eig(psi, false);
    std::vector<cplx> z;
    for (Eigen::Index j = 0; j < eig.eigenvalues().size(); ++j)
    {
        const cplx lam = eig.eigenvalues()(j);
        if (std::abs(lam) == 0.0)
        {
            continue;
        }
        z.push_back(std::log(lam) / dt);
    }
    const std::vector<cplx> amp = fit_amplitudes(values, dt, z);
    const double nyquist = pi / dt;
    for (std::size_t j = 0; j < z.size(); ++j)
    {
        Mode m{z[j], amp[j], std::abs(z[j].imag()) > 0.9 * nyquist};
        out.aliasing_warning = out.aliasing_warning || m.aliased;
        out.modes.push_back(m);
    }
    std::sort(out.modes.begin(), out.modes.end(), [](const Mode& a, const Mode& b) {
        return a.z.real() != b.z.real() ? a.z.real() > b.z.real() : a.z.imag() > b.z.imag();
    });
    double res = 0.0;
    for (Eigen::Index m = 0; m < n; ++m)
    {
        const double d = values[static_cast<std::size_t>(m)] - evaluate_modes(out.modes, static_cast<double>(m) * dt);
        res += d * d;
    }
    out.residual_norm = std::sqrt(res);
    return out;
}

} // namespace rplab
