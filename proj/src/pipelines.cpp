#include "rplab/pipelines.hpp"

#include <filesystem>
#include <iostream>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rplab/error.hpp"

namespace rplab
{

namespace
{

std::ofstream open_out(const std::string& path)
{
    if (path.empty())
    {
        throw Error(ErrorKind::InvalidConfig, "missing output path (--out)");
    }
    std::ofstream out(path);
    if (!out)
    {
        throw Error(ErrorKind::Io, "cannot write " + path);
    }
    out.precision(17);
    return out;
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
    {
        throw Error(ErrorKind::Io, "cannot open " + path);
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string hex64(std::uint64_t h)
{
    std::ostringstream ss;
    ss << std::hex;
    ss.width(16);
    ss.fill('0');
    ss << h;
    return ss.str();
}

void write_meta(const std::string& artifact, const std::string& pipeline, const RunContext& ctx,
                nlohmann::json extra = nlohmann::json::object(), const std::vector<std::string>& inputs = {})
{
    nlohmann::json j;
    j["pipeline"] = pipeline;
    j["artifact"] = std::filesystem::path(artifact).filename().string();
    j["config_path"] = ctx.config_path;
    j["config_hash"] = ctx.config.hash();
    j["config"] = ctx.config.entries();
    j["seed"] = ctx.seed;
    j["version"] = RPLAB_VERSION;
    nlohmann::json in = nlohmann::json::array();
    for (const auto& p : inputs)
    {
        in.push_back({{"path", p}, {"fnv1a64", hex64(fnv1a64(read_file(p)))}});
    }
    j["inputs"] = in;
    j["results"] = std::move(extra);
    std::ofstream out(artifact + ".meta.json");
    out << j.dump(1) << '\n';
    if (!out)
    {
        throw Error(ErrorKind::Io, "cannot write metadata for " + artifact);
    }
}

SamplingPlan plan_for(const RunContext& ctx)
{
    SamplingPlan plan = SamplingPlan::from_config(ctx.config);
    plan.seed = ctx.seed;
    plan.threads = ctx.threads;
    return plan;
}

void write_edges_csv(const std::string& path, const std::vector<BandEdges>& edges)
{
    std::ofstream out = open_out(path);
    out << "k,gamma_minus,gamma_plus,T,n_orbits,extrapolation_error,converged,grid_minus,grid_plus,"
           "closed_minus,closed_plus,n_closed\n";
    for (const auto& e : edges)
    {
        out << e.k << ',' << e.gamma_minus << ',' << e.gamma_plus << ',' << e.horizon << ',' << e.n_orbits << ','
            << e.extrapolation_error << ',' << (e.converged ? 1 : 0) << ',' << e.grid.gamma_minus << ','
            << e.grid.gamma_plus << ',' << e.closed.gamma_minus << ',' << e.closed.gamma_plus << ',' << e.n_closed
            << '\n';
    }
}

std::vector<BandEdges> compute_edges(const FlowModel& model, const RunContext& ctx, const std::vector<int>& ks)
{
    const SamplingPlan plan = plan_for(ctx);
    const PotentialSpec v = PotentialSpec::from_config(ctx.config);
    const OrbitEnsemble grid = orbit_ensemble(model, plan);
    const ClosedEnsemble closed = closed_ensemble(model, plan);
    std::vector<BandEdges> out;
    for (int k : ks)
    {
        out.push_back(band_edges(grid, closed, v, k, plan.tolerance));
    }
    return out;
}

nlohmann::json anosov_json(const AnosovReport& r)
{
    return {{"lambda_estimate", r.lambda_estimate},
            {"lambda_stable_estimate", r.lambda_stable_estimate},
            {"contact_residual", r.contact_residual},
            {"min_symplectic", r.min_symplectic},
            {"contact_ok", r.contact_ok},
            {"passed", r.passed},
            {"diagnostic", r.diagnostic}};
}

AnosovReport verify_with(const FlowModel& model, const RunContext& ctx)
{
    return verify_anosov(model, static_cast<std::size_t>(ctx.config.get_int("verify_samples", 64)),
                         ctx.config.get_double("verify_time", 2.0), 0x7e57ULL);
}

LaplaceSpectrum spectrum_from(const RunContext& ctx, const std::optional<std::string>& path,
                              std::optional<double> area)
{
    if (path)
    {
        return read_spectrum_csv(*path, area);
    }
    return synthetic_weyl_spectrum(area.value_or(ctx.config.get_double("spectrum_area", 4.0 * pi)),
                                   ctx.config.get_double("spectrum_mu_max", 4000.0),
                                   ctx.config.get_double("spectrum_jitter", 0.5), ctx.seed);
}

void write_resonances(const std::string& path, const ResonanceList& list)
{
    std::ofstream out = open_out(path);
    out << resonances_to_json(list);
}

void write_bands_csv(const std::string& path, const ResonanceList& list, const BandTestReport& rep)
{
    std::ofstream out = open_out(path);
    out << "re,im,status,band\n";
    for (std::size_t i = 0; i < list.size(); ++i)
    {
        out << list[i].z.real() << ',' << list[i].z.imag() << ',' << to_string(rep.entries[i].status) << ','
            << rep.entries[i].band << '\n';
    }
}

void write_weyl_csv(const std::string& path, const WeylFit& fit)
{
    std::ofstream out = open_out(path);
    out << "b,count\n";
    for (std::size_t j = 0; j < fit.b.size(); ++j)
    {
        out << fit.b[j] << ',' << fit.counts[j] << '\n';
    }
}

nlohmann::json weyl_json(const WeylFit& fit)
{
    return {{"fitted", fit.fitted}, {"slope", fit.slope}, {"constant", fit.constant}, {"prefactor", fit.prefactor}};
}

void write_concentration_csv(const std::string& path, const ConcentrationReport& rep)
{
    std::ofstream out = open_out(path);
    out << "b,n,statistic\n";
    for (const auto& p : rep.points)
    {
        out << p.b << ',' << p.n << ',';
        if (p.statistic)
        {
            out << *p.statistic;
        }
        else
        {
            out << "undefined";
        }
        out << '\n';
    }
}

nlohmann::json membership_json(const BandTestReport& rep)
{
    return {{"total", rep.entries.size()},
            {"assigned", rep.assigned},
            {"ambiguous", rep.ambiguous},
            {"exempt", rep.exempt},
            {"violations", rep.violations}};
}

MeanEstimate damping_mean(const FlowModel& model, const RunContext& ctx)
{
    const PotentialSpec v = PotentialSpec::from_config(ctx.config);
    return space_average(
        model, [&](const PhasePoint& p) { return damping(model, v, p); },
        static_cast<std::size_t>(ctx.config.get_int("d_mean_samples", 2000)), ctx.seed ^ 0xd3a9ULL, ctx.threads);
}

} // namespace

std::vector<EdgePair> read_edges_csv(const std::string& path)
{
    std::stringstream in(read_file(path));
    std::string line;
    std::getline(in, line);
    std::vector<std::pair<int, EdgePair>> rows;
    while (std::getline(in, line))
    {
        if (line.empty())
        {
            continue;
        }
        std::stringstream ls(line);
        std::string k;
        std::string lo;
        std::string hi;
        std::getline(ls, k, ',');
        std::getline(ls, lo, ',');
        std::getline(ls, hi, ',');
        try
        {
            rows.push_back({std::stoi(k), EdgePair{std::stod(lo), std::stod(hi)}});
        }
        catch (const std::exception&)
        {
            throw Error(ErrorKind::InvalidConfig, "malformed band edges line: " + line);
        }
    }
    std::vector<EdgePair> edges(rows.size());
    for (const auto& [k, e] : rows)
    {
        if (k < 0 || static_cast<std::size_t>(k) >= rows.size())
        {
            throw Error(ErrorKind::InvalidConfig, "band edges must cover k = 0..k_max");
        }
        edges[static_cast<std::size_t>(k)] = e;
    }
    return edges;
}

std::vector<BandEdges> run_band_edges(const RunContext& ctx, const std::vector<int>& ks)
{
    const FlowModel model = build_model(ctx.config);
    const std::vector<BandEdges> edges = compute_edges(model, ctx, ks);
    write_edges_csv(ctx.out, edges);
    write_meta(ctx.out, "band-edges", ctx);
    return edges;
}

ResonanceList run_resonances(const RunContext& ctx, const std::optional<std::string>& spectrum_path,
                             std::optional<double> area, int k_max, int n_max)
{
    const LaplaceSpectrum spec = spectrum_from(ctx, spectrum_path, area);
    ResonanceList list = resonances_from_laplacian(spec, k_max, n_max);
    write_resonances(ctx.out, list);
    std::vector<std::string> inputs;
    if (spectrum_path)
    {
        inputs.push_back(*spectrum_path);
    }
    write_meta(ctx.out, "resonances", ctx,
               {{"area", spec.area}, {"n_eigenvalues", spec.mu.size()}, {"source", spec.source}}, inputs);
    return list;
}

CorrelationSeries run_correlate(const RunContext& ctx, const std::string& u, const std::string& v)
{
    const FlowModel model = build_model(ctx.config);
    const CorrelationSeries s = correlation_series(
        model, Observable::parse(u), Observable::parse(v), ctx.config.get_double("dt", 0.05),
        static_cast<std::size_t>(ctx.config.get_int("n_points", 4000)),
        static_cast<std::size_t>(ctx.config.get_int("n_samples", 100000)), ctx.seed, ctx.threads);
    write_series_csv(ctx.out, s);
    write_meta(ctx.out, "correlate", ctx, {{"u", u}, {"v", v}, {"volume", model.volume()}});
    return s;
}

ModeSet run_invert(const RunContext& ctx, const std::string& series_path, const InversionOptions& options,
                   const std::optional<std::string>& pair_path)
{
    CorrelationSeries s = read_series_csv(series_path);
    InversionOptions opt = options;
    std::vector<std::string> inputs{series_path};
    if (pair_path)
    {
        const SplitSeries split = combine_independent(s, read_series_csv(*pair_path));
        s = split.mean;
        opt.sv_threshold = noise_sv_threshold(s.values, split.noise, 1.5, opt.max_columns);
        inputs.push_back(*pair_path);
    }
    const ModeSet modes = harmonic_inversion(s.values, s.dt, opt);
    std::ofstream out = open_out(ctx.out);
    out << modes_to_json(modes, s.dt);
    write_meta(ctx.out, "invert", ctx,
               {{"max_modes", opt.max_modes}, {"sv_threshold", opt.sv_threshold}, {"rank", modes.rank}}, inputs);
    return modes;
}

WeylFit run_weyl(const RunContext& ctx, const std::string& resonances_path, int k, double b_min, double b_max,
                 int n_ladder, double eps_exponent)
{
    const ResonanceList list = resonances_from_json(read_file(resonances_path));
    const WeylFit fit = weyl_fit(list, k, geometric_ladder(b_min, b_max, n_ladder), eps_exponent);
    write_weyl_csv(ctx.out, fit);
    write_meta(ctx.out, "weyl", ctx, weyl_json(fit), {resonances_path});
    return fit;
}

BandTestReport run_bands(const RunContext& ctx, const std::string& resonances_path, const std::string& edges_path,
                         double eps, double c0)
{
    const ResonanceList list = resonances_from_json(read_file(resonances_path));
    const BandTestReport rep = band_membership(list, read_edges_csv(edges_path), eps, c0);
    write_bands_csv(ctx.out, list, rep);
    write_meta(ctx.out, "bands", ctx, membership_json(rep), {resonances_path, edges_path});
    return rep;
}

ConcentrationReport run_concentrate(const RunContext& ctx, const std::string& resonances_path, double d_mean,
                                    double b_min, double b_max, int n_ladder)
{
    const ResonanceList list = resonances_from_json(read_file(resonances_path));
    const ConcentrationReport rep = concentration(list, d_mean, geometric_ladder(b_min, b_max, n_ladder));
    write_concentration_csv(ctx.out, rep);
    write_meta(ctx.out, "concentrate", ctx, {{"d_mean", d_mean}, {"nonincreasing", rep.nonincreasing}},
               {resonances_path});
    return rep;
}

AnosovReport run_verify_anosov(const RunContext& ctx)
{
    KeyValueConfig cfg = ctx.config;
    cfg.set("verify_samples", "0"); // verification below reports instead of throwing
    const FlowModel model = build_model(cfg);
    const AnosovReport rep = verify_with(model, ctx);
    std::ofstream out = open_out(ctx.out);
    nlohmann::json j = anosov_json(rep);
    j["kind"] = to_string(model.kind);
    j["epsilon"] = model.epsilon;
    out << j.dump(1) << '\n';
    write_meta(ctx.out, "verify-anosov", ctx);
    return rep;
}

std::size_t run_reproduce_fig2(const RunContext& ctx)
{
    namespace fs = std::filesystem;
    const fs::path dir(ctx.out);
    fs::create_directories(dir);
    auto at = [&](const std::string& name) { return (dir / name).string(); };
    auto log = [&](const std::string& msg) {
        if (!ctx.quiet)
        {
            std::cerr << "reproduce-fig2: " << msg << '\n';
        }
    };

    // 1. Model and Anosov verification.
    KeyValueConfig cfg = ctx.config;
    cfg.set("verify_samples", "0");
    const FlowModel model = build_model(cfg);
    const AnosovReport anosov = verify_with(model, ctx);
    {
        std::ofstream out = open_out(at("verify_anosov.json"));
        out << anosov_json(anosov).dump(1) << '\n';
    }
    if (!anosov.passed)
    {
        throw Error(ErrorKind::NotAnosov, "Anosov verification failed: " + anosov.diagnostic);
    }
    log("verified Anosov, lambda = " + std::to_string(anosov.lambda_estimate));

    // 2. Band edges k = 0..kmax (panel b).
    const int k_max = static_cast<int>(ctx.config.get_int("fig2_kmax", 3));
    std::vector<int> ks;
    for (int k = 0; k <= k_max; ++k)
    {
        ks.push_back(k);
    }
    const std::vector<BandEdges> edges = compute_edges(model, ctx, ks);
    write_edges_csv(at("band_edges.csv"), edges);
    const MeanEstimate d_mean = damping_mean(model, ctx);
    log("band edges computed");

    // 3. Analytic catalog from a synthetic Weyl spectrum (panel a).
    const LaplaceSpectrum spec = spectrum_from(ctx, std::nullopt, model.surface_area);
    write_spectrum_csv(at("spectrum.csv"), spec);
    const ResonanceList list = resonances_from_laplacian(spec, k_max, static_cast<int>(ctx.config.get_int("fig2_nmax", 4)));
    write_resonances(at("resonances.json"), list);

    // 4. Membership, Weyl counting, concentration.
    std::vector<EdgePair> pairs;
    for (const auto& e : edges)
    {
        pairs.push_back({e.gamma_minus, e.gamma_plus});
    }
    const BandTestReport bands =
        band_membership(list, pairs, ctx.config.get_double("bands_eps", 1e-3), ctx.config.get_double("bands_c0", 5.0));
    write_bands_csv(at("bands.csv"), list, bands);
    const WeylFit weyl = weyl_fit(list, 0,
                                  geometric_ladder(ctx.config.get_double("weyl_b_min", 10.0),
                                                   ctx.config.get_double("weyl_b_max", 60.0),
                                                   static_cast<int>(ctx.config.get_int("weyl_ladder", 12))),
                                  ctx.config.get_double("weyl_eps_exponent", 0.0));
    write_weyl_csv(at("weyl.csv"), weyl);
    const ConcentrationReport conc =
        concentration(list, d_mean.mean,
                      geometric_ladder(ctx.config.get_double("concentrate_b_min", 5.0),
                                       ctx.config.get_double("concentrate_b_max", 60.0),
                                       static_cast<int>(ctx.config.get_int("concentrate_ladder", 8))));
    write_concentration_csv(at("concentrate.csv"), conc);

    // Figure data: panel (a) catalog points, panel (b) band strips and <D>.
    {
        std::ofstream a = open_out(at("fig2_a.csv"));
        a << "re,im,band\n";
        for (const auto& r : list)
        {
            a << r.z.real() << ',' << r.z.imag() << ',';
            if (r.family == ResonanceFamily::Band)
            {
                a << r.band;
            }
            else
            {
                a << (r.family == ResonanceFamily::Exceptional ? "exceptional" : "integer");
            }
            a << '\n';
        }
        std::ofstream b = open_out(at("fig2_b.csv"));
        b << "k,gamma_minus,gamma_plus,d_mean,d_mean_stderr\n";
        for (const auto& e : edges)
        {
            b << e.k << ',' << e.gamma_minus << ',' << e.gamma_plus << ',' << d_mean.mean << ',' << d_mean.std_error
              << '\n';
        }
    }

    nlohmann::json summary = {{"anosov", anosov_json(anosov)},
                              {"membership", membership_json(bands)},
                              {"weyl", weyl_json(weyl)},
                              {"d_mean", d_mean.mean},
                              {"d_mean_stderr", d_mean.std_error},
                              {"concentration_nonincreasing", conc.nonincreasing}};
    nlohmann::json edge_rows = nlohmann::json::array();
    for (const auto& e : edges)
    {
        edge_rows.push_back({{"k", e.k},
                             {"gamma_minus", e.gamma_minus},
                             {"gamma_plus", e.gamma_plus},
                             {"extrapolation_error", e.extrapolation_error},
                             {"converged", e.converged}});
    }
    summary["band_edges"] = edge_rows;
    {
        std::ofstream out = open_out(at("summary.json"));
        out << summary.dump(1) << '\n';
    }
    write_meta(at("summary.json"), "reproduce-fig2", ctx);
    log("membership violations: " + std::to_string(bands.violations));
    return bands.violations;
}

} // namespace rplab
