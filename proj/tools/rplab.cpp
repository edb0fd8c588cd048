// rplab command line: one subcommand per pipeline.

#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "rplab/error.hpp"
#include "rplab/pipelines.hpp"

namespace
{

void report_error(const char* kind, const std::string& message)
{
    nlohmann::json j = {{"error", kind}, {"message", message}};
    std::cerr << j.dump() << '\n';
}

} // namespace

int main(int argc, char** argv)
{
    using namespace rplab;

    CLI::App app{"Resonance lab for geodesic flows on the Bolza surface"};
    app.set_version_flag("--version", std::string(RPLAB_VERSION));
    app.require_subcommand(1);

    std::string config_path;
    std::uint64_t seed = 1;
    std::string out;
    int threads = 1;
    bool quiet = false;
    app.add_option("--config", config_path, "key = value configuration file")->check(CLI::ExistingFile);
    app.add_option("--seed", seed, "random seed");
    app.add_option("--out", out, "output file (directory for reproduce-fig2)");
    app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    app.add_flag("--quiet", quiet, "suppress progress output");

    // band-edges
    auto* edges = app.add_subcommand("band-edges", "Birkhoff band edges of the damping function");
    std::vector<int> ks;
    int kmax = -1;
    edges->add_option("--k", ks, "band indices");
    edges->add_option("--kmax", kmax, "compute k = 0..kmax");

    // resonances
    auto* res = app.add_subcommand("resonances", "Analytic resonance catalog from a Laplace spectrum");
    std::optional<std::string> spectrum;
    std::optional<double> area;
    int res_kmax = 3;
    int res_nmax = 4;
    res->add_option("--spectrum", spectrum, "CSV of Laplace eigenvalues (synthetic Weyl spectrum if omitted)");
    res->add_option("--area", area, "surface area (overrides the CSV sidecar)");
    res->add_option("--kmax", res_kmax, "highest band");
    res->add_option("--nmax", res_nmax, "highest integer resonance -n");

    // correlate
    auto* corr = app.add_subcommand("correlate", "Monte-Carlo correlation function");
    std::string u_text = "bump0";
    std::string v_text = "bump0";
    corr->add_option("--u", u_text, "observable u");
    corr->add_option("--v", v_text, "observable v");

    // invert
    auto* inv = app.add_subcommand("invert", "Harmonic inversion of a correlation series");
    std::string series;
    InversionOptions inv_opts;
    inv->add_option("--series", series, "correlation CSV")->required()->check(CLI::ExistingFile);
    inv->add_option("--max-modes", inv_opts.max_modes, "mode cap");
    inv->add_option("--sv-threshold", inv_opts.sv_threshold, "relative singular value cutoff");
    std::optional<std::string> pair;
    inv->add_option("--pair", pair, "independent series of the same correlation; sets the cutoff from the noise")
        ->check(CLI::ExistingFile);

    // weyl
    auto* weyl = app.add_subcommand("weyl", "Band counting in windows [b, b+1)");
    std::string weyl_in;
    int weyl_k = 0;
    double weyl_bmin = 10.0;
    double weyl_bmax = 60.0;
    int weyl_n = 12;
    double weyl_eps = 0.0;
    weyl->add_option("--resonances", weyl_in, "resonances JSON")->required()->check(CLI::ExistingFile);
    weyl->add_option("--k", weyl_k, "band index");
    weyl->add_option("--b-min", weyl_bmin, "smallest window start");
    weyl->add_option("--b-max", weyl_bmax, "largest window start");
    weyl->add_option("--n", weyl_n, "ladder size");
    weyl->add_option("--eps-exponent", weyl_eps, "window width b^eps");

    // bands
    auto* bands = app.add_subcommand("bands", "Band membership of a resonance list");
    std::string bands_in;
    std::string bands_edges;
    double bands_eps = 1e-3;
    double bands_c0 = 5.0;
    bands->add_option("--resonances", bands_in, "resonances JSON")->required()->check(CLI::ExistingFile);
    bands->add_option("--edges", bands_edges, "band edges CSV")->required()->check(CLI::ExistingFile);
    bands->add_option("--eps", bands_eps, "strip tolerance");
    bands->add_option("--c0", bands_c0, "exempt |Im z| <= c0");

    // concentrate
    auto* conc = app.add_subcommand("concentrate", "Band-0 concentration about <D>");
    std::string conc_in;
    double d_mean = -0.5;
    double conc_bmin = 5.0;
    double conc_bmax = 60.0;
    int conc_n = 8;
    conc->add_option("--resonances", conc_in, "resonances JSON")->required()->check(CLI::ExistingFile);
    conc->add_option("--d-mean", d_mean, "space average of the damping function");
    conc->add_option("--b-min", conc_bmin, "smallest cutoff");
    conc->add_option("--b-max", conc_bmax, "largest cutoff");
    conc->add_option("--n", conc_n, "ladder size");

    auto* verify = app.add_subcommand("verify-anosov", "Check the Anosov and contact properties");
    auto* fig2 = app.add_subcommand("reproduce-fig2", "Full chain: edges, catalog, membership, counting");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp& e)
    {
        return app.exit(e);
    }
    catch (const CLI::CallForVersion& e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError& e)
    {
        report_error("usage", e.what());
        return 2;
    }

    try
    {
        RunContext ctx;
        if (!config_path.empty())
        {
            ctx.config = KeyValueConfig::load(config_path);
        }
        ctx.config_path = config_path;
        ctx.seed = seed;
        ctx.out = out;
        ctx.threads = threads;
        ctx.quiet = quiet;

        if (*edges)
        {
            if (kmax >= 0)
            {
                for (int k = 0; k <= kmax; ++k)
                {
                    ks.push_back(k);
                }
            }
            if (ks.empty())
            {
                ks = {0};
            }
            for (const auto& e : run_band_edges(ctx, ks))
            {
                if (!quiet)
                {
                    std::cout << "k=" << e.k << " gamma-=" << e.gamma_minus << " gamma+=" << e.gamma_plus
                              << " err=" << e.extrapolation_error << (e.converged ? "" : " (not converged)")
                              << '\n';
                }
            }
        }
        else if (*res)
        {
            const auto list = run_resonances(ctx, spectrum, area, res_kmax, res_nmax);
            if (!quiet)
            {
                std::cout << list.size() << " resonances\n";
            }
        }
        else if (*corr)
        {
            const auto s = run_correlate(ctx, u_text, v_text);
            if (!quiet)
            {
                std::cout << s.values.size() << " points, C(0) = " << s.values.front() << '\n';
            }
        }
        else if (*inv)
        {
            const auto modes = run_invert(ctx, series, inv_opts, pair);
            if (!quiet)
            {
                for (const auto& m : modes.modes)
                {
                    std::cout << m.z.real() << (m.z.imag() < 0 ? " - " : " + ") << std::abs(m.z.imag())
                              << "i  |a| = " << std::abs(m.amplitude) << (m.aliased ? "  (aliased)" : "") << '\n';
                }
            }
        }
        else if (*weyl)
        {
            const auto fit = run_weyl(ctx, weyl_in, weyl_k, weyl_bmin, weyl_bmax, weyl_n, weyl_eps);
            if (!quiet)
            {
                std::cout << "slope = " << fit.slope << "  prefactor = " << fit.prefactor << '\n';
            }
        }
        else if (*bands)
        {
            const auto rep = run_bands(ctx, bands_in, bands_edges, bands_eps, bands_c0);
            if (!quiet)
            {
                std::cout << rep.assigned << " assigned, " << rep.violations << " violations\n";
            }
            return rep.violations == 0 ? 0 : 1;
        }
        else if (*conc)
        {
            const auto rep = run_concentrate(ctx, conc_in, d_mean, conc_bmin, conc_bmax, conc_n);
            if (!quiet)
            {
                std::cout << "nonincreasing = " << (rep.nonincreasing ? "true" : "false") << '\n';
            }
        }
        else if (*verify)
        {
            const auto rep = run_verify_anosov(ctx);
            if (!quiet)
            {
                std::cout << "lambda = " << rep.lambda_estimate << "  passed = " << (rep.passed ? "true" : "false")
                          << '\n';
            }
            return rep.passed ? 0 : 1;
        }
        else if (*fig2)
        {
            return run_reproduce_fig2(ctx) == 0 ? 0 : 1;
        }
    }
    catch (const Error& e)
    {
        report_error(to_string(e.kind()), e.what());
        return e.kind() == ErrorKind::InvalidConfig ? 2 : 1;
    }
    catch (const std::exception& e)
    {
        report_error("internal", e.what());
        return 1;
    }
    return 0;
}
