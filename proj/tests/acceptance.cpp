// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <thread>

#include <Eigen/Dense>

#include "rplab/band_edges.hpp"
#include "rplab/correlation.hpp"
#include "rplab/geodesic_flow.hpp"
#include "rplab/harmonic_inversion.hpp"
#include "rplab/liouville.hpp"
#include "rplab/resonances.hpp"
#include "rplab/spectral_stats.hpp"

using namespace rplab;

namespace
{

struct Outcome
{
    bool passed = false;
    std::string detail;
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...)
{
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

int threads()
{
    return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

std::shared_ptr<const FuchsianGroup> bolza()
{
    static const auto g = std::make_shared<const FuchsianGroup>(FuchsianGroup::bolza());
    return g;
}

FlowModel model(double eps)
{
    return make_model(bolza(), eps == 0.0 ? FlowKind::ConstantCurvature : FlowKind::ConformalPerturbation, eps);
}

// Mode sets produced along the way, checked for conjugation closure at the end.
std::vector<ModeSet> inverted;
std::vector<ResonanceList> catalogs;

bool closed_under_conjugation(const std::vector<Mode>& modes, double tol)
{
    for (const auto& m : modes)
    {
        double best = 1e300;
        for (const auto& n : modes)
        {
            best = std::min(best, std::abs(n.z - std::conj(m.z)));
        }
        if (best > tol)
        {
            return false;
        }
    }
    return true;
}

// 1. Constant curvature, V = 0: gamma_k^+- = -1/2 - k.
Outcome band_edges_constant_curvature()
{
    const FlowModel m = model(0.0);
    SamplingPlan plan;
    plan.threads = threads();
    const OrbitEnsemble grid = orbit_ensemble(m, plan);
    const ClosedEnsemble closed = closed_ensemble(m, plan);
    double worst = 0.0;
    for (int k = 0; k <= 3; ++k)
    {
        const BandEdges e = band_edges(grid, closed, PotentialSpec{}, k, plan.tolerance);
        worst = std::max({worst, std::abs(e.gamma_minus + 0.5 + k), std::abs(e.gamma_plus + 0.5 + k)});
    }
    return {worst < 1e-3, fmt("max |gamma_k - (-1/2 - k)| = %.2e over k = 0..3, %zu orbits", worst, plan.n_orbits)};
}

// 2. V = u/2 cancels the unstable Jacobian: gamma_0^+- = 0.
Outcome band_edges_half_u()
{
    const FlowModel m = model(0.0);
    SamplingPlan plan;
    plan.threads = threads();
    PotentialSpec v;
    v.c2 = 1.0;
    const BandEdges e = band_edges(m, v, 0, plan);
    const double worst = std::max(std::abs(e.gamma_minus), std::abs(e.gamma_plus));
    return {worst < 1e-3, fmt("gamma_0^- = %.3e, gamma_0^+ = %.3e", e.gamma_minus, e.gamma_plus)};
}

// 3. gamma_0^+ <= -lambda / 2 at epsilon = 0 and 0.05.
Outcome band_edge_vs_expansion_rate()
{
    bool ok = true;
    std::string detail;
    for (double eps : {0.0, 0.05})
    {
        const FlowModel m = model(eps);
        const AnosovReport rep = verify_anosov(m, 64, 2.0, 0x7e57ULL);
        SamplingPlan plan;
        plan.threads = threads();
        plan.n_orbits = eps == 0.0 ? 10000 : 256;
        const BandEdges e = band_edges(m, PotentialSpec{}, 0, plan);
        const double bound = -0.5 * rep.lambda_estimate + 1e-3;
        ok = ok && rep.passed && e.gamma_plus <= bound;
        detail += fmt("eps=%.2f: gamma_0^+ = %.4f (grid %.4f, closed %.4f), -lambda/2 = %.4f; ", eps, e.gamma_plus,
                      e.grid.gamma_plus, e.closed.gamma_plus, -0.5 * rep.lambda_estimate);
    }
    return {ok, detail};
}

// 4. Analytic catalog from 500 eigenvalues lies exactly on the band lines.
Outcome catalog_structure()
{
    LaplaceSpectrum spec = synthetic_weyl_spectrum(4.0 * pi, 600.0, 0.5, 4);
    spec.mu.resize(500);
    const ResonanceList list = resonances_from_laplacian(spec, 3, 3);
    catalogs.push_back(list);
    double worst_re = 0.0;
    double worst_mu = 0.0;
    std::size_t n = 0;
    for (const auto& r : list)
    {
        if (r.family != ResonanceFamily::Band)
        {
            continue;
        }
        ++n;
        worst_re = std::max(worst_re, std::abs(r.z.real() - (-0.5 - r.band)));
        const double mu = spec.mu[static_cast<std::size_t>(r.level)];
        worst_mu = std::max(worst_mu, std::abs(r.z.imag() * r.z.imag() + 0.25 - mu));
    }
    return {worst_re == 0.0 && worst_mu < 1e-12,
            fmt("%zu band entries, max |Re z + 1/2 + k| = %.1e, max |Im^2 + 1/4 - mu| = %.1e", n, worst_re,
                worst_mu)};
}

// 5. Band-0 counts in unit windows grow linearly.
Outcome weyl_slope()
{
    const LaplaceSpectrum spec = synthetic_weyl_spectrum(4.0 * pi, 3800.0, 0.5, 5);
    const ResonanceList list = resonances_from_laplacian(spec, 0, 0);
    catalogs.push_back(list);
    const WeylFit fit = weyl_fit(list, 0, geometric_ladder(10.0, 60.0, 12));
    return {fit.fitted && std::abs(fit.slope - 1.0) <= 0.1,
            fmt("log-log slope %.4f, prefactor %.4f (area / 2 pi = 2)", fit.slope, fit.prefactor)};
}

// 6. Six conjugate-paired modes, clean and with 1% noise.
Outcome synthetic_inversion()
{
    const std::vector<cplx> z{{-0.05, 1.0}, {-0.1, 2.0}, {-0.15, 3.5}};
    const std::vector<cplx> a{{1.0, 0.2}, {0.7, -0.3}, {0.5, 0.1}};
    const double dt = 0.05;
    const int n = 1000;
    std::vector<double> c(n, 0.0);
    for (int m = 0; m < n; ++m)
    {
        for (std::size_t j = 0; j < z.size(); ++j)
        {
            c[static_cast<std::size_t>(m)] += 2.0 * std::real(a[j] * std::exp(z[j] * (m * dt)));
        }
    }
    InversionOptions opt;
    opt.max_modes = 6;
    opt.sv_threshold = 1e-2;
    auto mismatch = [&](const ModeSet& ms) {
        double worst = 0.0;
        for (const cplx& zt : z)
        {
            for (const cplx& target : {zt, std::conj(zt)})
            {
                double best = 1e300;
                for (const auto& m : ms.modes)
                {
                    best = std::min(best, std::abs(m.z - target));
                }
                worst = std::max(worst, best);
            }
        }
        return worst;
    };
    const ModeSet clean = harmonic_inversion(c, dt, opt);
    inverted.push_back(clean);
    const double err_clean = mismatch(clean);

    double cmax = 0.0;
    for (double x : c)
    {
        cmax = std::max(cmax, std::abs(x));
    }
    std::mt19937_64 rng(2024);
    std::normal_distribution<double> noise(0.0, 0.01 * cmax);
    for (double& x : c)
    {
        x += noise(rng);
    }
    const ModeSet noisy = harmonic_inversion(c, dt, opt);
    inverted.push_back(noisy);
    const double err_noisy = mismatch(noisy);
    return {err_clean < 1e-6 && err_noisy < 1e-2,
            fmt("max |dz| = %.2e clean, %.2e at 1%% noise", err_clean, err_noisy)};
}

// 7. Correlation of a mean-zero observable at constant curvature.
Outcome correlation_consistency()
{
    const FlowModel m = model(0.0);
    Observable u = Observable::parse("bump0");
    u.bind(m);
    const double dt = 0.25;
    // Two independent halves: their mean is the 10^6-sample estimate, half
    // their difference a noise realisation that fixes the rank cutoff.
    const SplitSeries split = combine_independent(correlation_series(m, u, u, dt, 400, 500000, 77, threads()),
                                                  correlation_series(m, u, u, dt, 400, 500000, 78, threads()));
    const CorrelationSeries& s = split.mean;
    InversionOptions opt;
    opt.max_modes = 20;
    opt.sv_threshold = noise_sv_threshold(s.values, split.noise);
    const ModeSet ms = harmonic_inversion(s.values, dt, opt);
    inverted.push_back(ms);

    SamplingPlan plan;
    plan.n_orbits = 200;
    plan.threads = threads();
    const double gamma0 = band_edges(m, PotentialSpec{}, 0, plan).gamma_plus;

    // A mode is resolved when its peak contribution 2|a| exceeds the typical
    // Monte Carlo error of a single point.
    std::vector<double> se = s.std_error;
    std::nth_element(se.begin(), se.begin() + static_cast<long>(se.size() / 2), se.end());
    const double floor = se[se.size() / 2];
    bool ok = true;
    const Mode* leading = nullptr;
    int n_above = 0;
    for (const auto& mode : ms.modes)
    {
        if (2.0 * std::abs(mode.amplitude) <= floor)
        {
            continue;
        }
        ++n_above;
        ok = ok && mode.z.real() <= gamma0 + 0.1;
        if (!leading || mode.z.real() > leading->z.real())
        {
            leading = &mode;
        }
    }
    ok = ok && leading && leading->z.real() >= -0.65 && leading->z.real() <= -0.35;
    return {ok, fmt("cutoff %.3g, rank %d; %d modes above floor %.1e, all Re z <= %.3f required; leading z = %.4f "
                    "%+.4fi",
                    opt.sv_threshold, ms.rank, n_above, floor, gamma0 + 0.1, leading ? leading->z.real() : NAN,
                    leading ? leading->z.imag() : NAN)};
}

// 8. Concentration statistic.
Outcome concentration_statistic()
{
    const ResonanceList list = resonances_from_laplacian(synthetic_weyl_spectrum(4.0 * pi, 4000.0, 0.5, 8), 3, 3);
    const auto ladder = geometric_ladder(5.0, 60.0, 8);
    const ConcentrationReport flat = concentration(list, -0.5, ladder);
    bool zero = true;
    for (const auto& p : flat.points)
    {
        zero = zero && p.statistic && *p.statistic == 0.0;
    }

    // Band-0 entries approaching Re = -1/2 like 1/log Im, alternating sides.
    ResonanceList shrinking;
    for (int l = 1; l <= 4000; ++l)
    {
        Resonance r;
        const double im = 1.0 + 0.025 * l;
        r.z = cplx(-0.5 + (l % 2 ? 0.3 : -0.3) / std::log(1.0 + im), im);
        shrinking.push_back(r);
        r.z = std::conj(r.z);
        shrinking.push_back(r);
    }
    const ConcentrationReport dec = concentration(shrinking, -0.5, ladder);
    bool strictly = true;
    for (std::size_t i = 1; i < dec.points.size(); ++i)
    {
        strictly = strictly && *dec.points[i].statistic < *dec.points[i - 1].statistic;
    }
    return {zero && strictly, fmt("constant curvature: %s; 1/log catalog: %.4f -> %.4f, %s", zero ? "all 0" : "non-zero",
                                  *dec.points.front().statistic, *dec.points.back().statistic,
                                  strictly ? "strictly decreasing" : "NOT decreasing")};
}

std::string slurp(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// 9. Invariant suites.
Outcome invariants()
{
    const FlowModel m = model(0.05);
    std::string detail;
    bool ok = true;

    // Riccati residual with a fourth-order stencil.
    double riccati = 0.0;
    for (std::uint64_t i = 0; i < 8; ++i)
    {
        const RiccatiOrbit ro = unstable_along_orbit(m, sample_liouville(m, 901, i), 10.0);
        const double h = ro.trajectory.step;
        for (std::size_t j = 2; j + 2 < ro.u.size(); ++j)
        {
            const double du = (ro.u[j - 2] - 8.0 * ro.u[j - 1] + 8.0 * ro.u[j + 1] - ro.u[j + 2]) / (12.0 * h);
            riccati = std::max(riccati, std::abs(du + ro.trajectory.points[j].curvature + ro.u[j] * ro.u[j]));
        }
    }
    ok = ok && riccati < 1e-6;
    detail += fmt("riccati %.1e; ", riccati);

    // Cocycle additivity of the unstable Jacobian.
    double cocycle = 0.0;
    for (std::uint64_t i = 0; i < 8; ++i)
    {
        const PhasePoint p = sample_liouville(m, 902, i);
        const double whole = unstable_jacobian_log(m, p, 7.0);
        const double parts = unstable_jacobian_log(m, p, 3.0) + unstable_jacobian_log(m, flow_map(m, p, 3.0), 4.0);
        cocycle = std::max(cocycle, std::abs(whole - parts));
    }
    ok = ok && cocycle < 1e-6;
    detail += fmt("cocycle %.1e; ", cocycle);

    // Volume: Liouville density times the Jacobian determinant of phi_t.
    double drift = 0.0;
    auto density = [&](cplx w) {
        const double lam = 2.0 / (1.0 - std::norm(w));
        return std::exp(2.0 * m.psi(w)) * lam * lam;
    };
    for (std::uint64_t i = 0; i < 16; ++i)
    {
        const PhasePoint p = sample_liouville(m, 903, i);
        const cplx w = p.disk_point();
        const double th = p.disk_angle();
        const double t = 4.0;
        const double d = 1e-6;
        Eigen::Matrix3d jac;
        for (int c = 0; c < 3; ++c)
        {
            const cplx dw = c == 0 ? cplx(d, 0) : c == 1 ? cplx(0, d) : cplx(0, 0);
            const double dth = c == 2 ? d : 0.0;
            const PhasePoint a = flow_map(m, PhasePoint::from_disk(w + dw, th + dth), t);
            const PhasePoint b = flow_map(m, PhasePoint::from_disk(w - dw, th - dth), t);
            const cplx dz = a.disk_point() - b.disk_point();
            jac(0, c) = dz.real() / (2 * d);
            jac(1, c) = dz.imag() / (2 * d);
            jac(2, c) = std::remainder(a.disk_angle() - b.disk_angle(), 2 * pi) / (2 * d);
        }
        const double ratio = density(flow_map(m, p, 4.0).disk_point()) * jac.determinant() / density(w);
        drift = std::max(drift, std::abs(ratio - 1.0));
    }
    ok = ok && drift < 0.02;
    detail += fmt("volume drift %.1e; ", drift);

    // Group law.
    double group = 0.0;
    for (std::uint64_t i = 0; i < 16; ++i)
    {
        const PhasePoint p = sample_liouville(m, 904, i);
        group = std::max(group, psl_distance(flow_map(m, flow_map(m, p, 1.2), 2.3).g, flow_map(m, p, 3.5).g));
    }
    ok = ok && group < 1e-8;
    detail += fmt("group law %.1e; ", group);

    // Conjugation closure of every catalog and mode set produced above.
    bool closure = true;
    for (const auto& c : catalogs)
    {
        closure = closure && conjugation_closed(c, 0.0);
    }
    for (const auto& ms : inverted)
    {
        closure = closure && closed_under_conjugation(ms.modes, 1e-8);
    }
    ok = ok && closure;
    detail += fmt("conjugation %s (%zu lists); ", closure ? "closed" : "OPEN", catalogs.size() + inverted.size());

    // Determinism: identical bytes across repeated runs and thread counts.
    const auto dir = std::filesystem::temp_directory_path() / "rplab_acceptance";
    std::filesystem::create_directories(dir);
    Observable u = Observable::parse("bump0");
    u.bind(m);
    const CorrelationSeries s1 = correlation_series(m, u, u, 0.1, 50, 2000, 5, 1);
    const CorrelationSeries s2 = correlation_series(m, u, u, 0.1, 50, 2000, 5, threads() + 1);
    write_series_csv((dir / "a.csv").string(), s1);
    write_series_csv((dir / "b.csv").string(), s2);
    SamplingPlan plan;
    plan.n_orbits = 6;
    plan.windows = {25.0, 50.0};
    plan.max_closed = 4;
    plan.threads = 1;
    const BandEdges e1 = band_edges(m, PotentialSpec{}, 0, plan);
    plan.threads = 3;
    const BandEdges e2 = band_edges(m, PotentialSpec{}, 0, plan);
    const ResonanceList r = resonances_from_laplacian(synthetic_weyl_spectrum(4.0 * pi, 300.0, 0.5, 6), 2, 2);
    const bool same = slurp((dir / "a.csv").string()) == slurp((dir / "b.csv").string()) &&
                      e1.gamma_plus == e2.gamma_plus && e1.gamma_minus == e2.gamma_minus &&
                      resonances_to_json(r) ==
                          resonances_to_json(
                              resonances_from_laplacian(synthetic_weyl_spectrum(4.0 * pi, 300.0, 0.5, 6), 2, 2));
    std::filesystem::remove_all(dir);
    ok = ok && same;
    detail += fmt("determinism %s", same ? "byte-identical" : "DIFFERS");
    return {ok, detail};
}

} // namespace

int main()
{
    struct Criterion
    {
        const char* name;
        double budget_s;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {"1 band edges, constant curvature", 60.0, band_edges_constant_curvature},
        {"2 band edges, V = u/2", 60.0, band_edges_half_u},
        {"3 gamma_0^+ vs expansion rate", 120.0, band_edge_vs_expansion_rate},
        {"4 analytic catalog structure", 1.0, catalog_structure},
        {"5 Weyl-law slope", 1.0, weyl_slope},
        {"6 synthetic harmonic inversion", 10.0, synthetic_inversion},
        {"7 correlation consistency", 600.0, correlation_consistency},
        {"8 concentration statistic", 1.0, concentration_statistic},
        {"9 invariant suites", 300.0, invariants},
    };
    int failures = 0;
    for (const auto& c : criteria)
    {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome out;
        try
        {
            out = c.run();
        }
        catch (const std::exception& e)
        {
            out = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = secs < c.budget_s;
        const bool pass = out.passed && in_time;
        failures += pass ? 0 : 1;
        std::printf("%s  [%s]  %s  (%.2f s of %.0f s%s)\n", pass ? "PASS" : "FAIL", c.name, out.detail.c_str(), secs,
                    c.budget_s, in_time ? "" : ", over budget");
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
