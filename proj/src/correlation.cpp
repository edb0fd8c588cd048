#include "rplab/correlation.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rplab/error.hpp"
#include "rplab/geodesic_flow.hpp"
#include "rplab/liouville.hpp"
#include "rplab/parallel.hpp"

namespace rplab
{

Observable Observable::parse(const std::string& text)
{
    Observable obs;
    obs.text_ = text;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
    {
        const auto a = item.find_first_not_of(" \t");
        const auto b = item.find_last_not_of(" \t");
        if (a == std::string::npos)
        {
            continue;
        }
        item = item.substr(a, b - a + 1);
        const auto colon = item.find(':');
        const std::string name = item.substr(0, colon);
        double coef = 1.0;
        if (colon != std::string::npos)
        {
            try
            {
                std::size_t used = 0;
                coef = std::stod(item.substr(colon + 1), &used);
                if (used != item.size() - colon - 1)
                {
                    throw std::invalid_argument(item);
                }
            }
            catch (const std::exception&)
            {
                throw Error(ErrorKind::InvalidConfig, "bad observable coefficient in '" + item + "'");
            }
        }
        Basis basis;
        if (name == "one")
        {
            basis = Basis::One;
        }
        else if (name == "bump")
        {
            basis = Basis::Bump;
        }
        else if (name == "bump0")
        {
            basis = Basis::Bump0;
        }
        else if (name == "flow_bump")
        {
            basis = Basis::FlowBump;
            obs.needs_gradient_ = true;
        }
        else
        {
            throw Error(ErrorKind::InvalidConfig, "unknown observable basis function '" + name + "'");
        }
        obs.terms_.emplace_back(basis, coef);
    }
    if (obs.terms_.empty())
    {
        throw Error(ErrorKind::InvalidConfig, "empty observable '" + text + "'");
    }
    return obs;
}

bool Observable::mean_zero() const
{
    for (const auto& [basis, coef] : terms_)
    {
        if ((basis == Basis::One || basis == Basis::Bump) && coef != 0.0)
        {
            return false;
        }
    }
    return true;
}

double bump_mean(const FlowModel& model)
{
    if (model.exact_group())
    {
        return model.bump.area_mean(model.surface_area);
    }
    return space_average(
               model, [&](const PhasePoint& p) { return model.bump.value(p.disk_point()); }, 200000, 0xb0a7ULL)
        .mean;
}

void Observable::bind(const FlowModel& model)
{
    for (const auto& t : terms_)
    {
        if (t.first == Basis::Bump0)
        {
            bump_mean_ = bump_mean(model);
            return;
        }
    }
}

double Observable::operator()(const FlowModel& model, cplx w, double theta) const
{
    Jet2 jet;
    if (needs_gradient_)
    {
        jet = model.bump.jet(w);
    }
    else
    {
        jet.value = model.bump.value(w);
    }
    double out = 0.0;
    for (const auto& [basis, coef] : terms_)
    {
        switch (basis)
        {
        case Basis::One:
            out += coef;
            break;
        case Basis::Bump:
            out += coef * jet.value;
            break;
        case Basis::Bump0:
            out += coef * (jet.value - bump_mean_);
            break;
        case Basis::FlowBump:
        {
            // Unit-speed velocity in disk coordinates is e^{-Phi} e^{i theta}.
            const double phi = model.epsilon * jet.value + std::log(2.0 / (1.0 - std::norm(w)));
            out += coef * std::exp(-phi) * (jet.grad.real() * std::cos(theta) + jet.grad.imag() * std::sin(theta));
            break;
        }
        }
    }
    return out;
}

CorrelationSeries correlation_series(const FlowModel& model, const Observable& u, const Observable& v, double dt,
                                     std::size_t n_points, std::size_t n_samples, std::uint64_t seed, int threads)
{
    if (!(dt > 0.0) || n_points < 1 || n_samples < 2)
    {
        throw Error(ErrorKind::InvalidConfig, "correlation needs dt > 0, at least one point and two samples");
    }
    if (dt * static_cast<double>(n_points - 1) > model.horizon)
    {
        throw Error(ErrorKind::HorizonExceeded, "correlation window exceeds the flow horizon");
    }
    Observable ub = u;
    Observable vb = v;
    ub.bind(model);
    vb.bind(model);

    // The group flow is exact for any step; only reductions limit it.
    const int sub = model.exact_group() ? std::max(1, static_cast<int>(std::ceil(dt / 0.25)))
                                        : std::max(1, steps_for(model, dt));
    const double h = -dt / sub;

    constexpr std::size_t block = 1024;
    const std::size_t n_blocks = (n_samples + block - 1) / block;
    std::vector<std::vector<double>> s1(n_blocks, std::vector<double>(n_points, 0.0));
    std::vector<std::vector<double>> s2(n_blocks, std::vector<double>(n_points, 0.0));
    parallel_for(n_blocks, threads, [&](std::size_t b) {
        FlowStepper st(model);
        auto& a1 = s1[b];
        auto& a2 = s2[b];
        for (std::size_t i = b * block; i < std::min(n_samples, (b + 1) * block); ++i)
        {
            const PhasePoint p = sample_liouville(model, seed, i);
            st.reset(p);
            const double uval = ub(model, st.base(), st.angle());
            for (std::size_t m = 0; m < n_points; ++m)
            {
                if (m > 0)
                {
                    for (int s = 0; s < sub; ++s)
                    {
                        st.step(h);
                    }
                }
                const double x = uval * vb(model, st.base(), st.angle());
                a1[m] += x;
                a2[m] += x * x;
            }
        }
    });

    CorrelationSeries out;
    out.dt = dt;
    out.u = u.text();
    out.v = v.text();
    out.n_samples = n_samples;
    out.values.assign(n_points, 0.0);
    out.std_error.assign(n_points, 0.0);
    const auto n = static_cast<double>(n_samples);
    const double vol = model.volume();
    for (std::size_t m = 0; m < n_points; ++m)
    {
        double t1 = 0.0;
        double t2 = 0.0;
        for (std::size_t b = 0; b < n_blocks; ++b)
        {
            t1 += s1[b][m];
            t2 += s2[b][m];
        }
        const double mean = t1 / n;
        const double var = std::max(0.0, (t2 / n - mean * mean) * n / (n - 1.0));
        out.values[m] = vol * mean;
        out.std_error[m] = vol * std::sqrt(var / n);
    }
    return out;
}

ExpansionReport expansion_residual(const CorrelationSeries& series, const std::vector<Mode>& modes,
                                   double gamma1_plus, double eps, double noise_factor)
{
    ExpansionReport rep;
    double cmax = 0.0;
    for (double c : series.values)
    {
        cmax = std::max(cmax, std::abs(c));
    }
    // Leading run of points whose residual stands above the noise floor;
    // beyond it the residual is sampling noise, not decay.
    std::vector<double> ts;
    std::vector<double> ls;
    for (std::size_t m = 0; m < series.values.size(); ++m)
    {
        const double t = series.time(m);
        const double r = std::abs(series.values[m] - evaluate_modes(modes, t));
        rep.max_residual = std::max(rep.max_residual, r);
        const double se = m < series.std_error.size() ? series.std_error[m] : 0.0;
        const double floor = std::max(noise_factor * se, 1e-12 * cmax);
        if (!(r > floor))
        {
            break;
        }
        ts.push_back(t);
        ls.push_back(std::log(r));
    }
    rep.n_fit = ts.size();
    if (rep.n_fit < 5)
    {
        rep.vacuous = true;
        rep.passed = true;
        return rep;
    }
    const auto n = static_cast<double>(rep.n_fit);
    double mt = 0.0;
    double ml = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i)
    {
        mt += ts[i] / n;
        ml += ls[i] / n;
    }
    double stt = 0.0;
    double stl = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i)
    {
        stt += (ts[i] - mt) * (ts[i] - mt);
        stl += (ts[i] - mt) * (ls[i] - ml);
    }
    rep.slope = stl / stt;
    double sse = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i)
    {
        const double e = ls[i] - ml - rep.slope * (ts[i] - mt);
        sse += e * e;
    }
    rep.fit_error = std::sqrt(sse / (n - 2.0) / stt);
    rep.passed = rep.slope <= gamma1_plus + eps + rep.fit_error;
    return rep;
}

SplitSeries combine_independent(const CorrelationSeries& a, const CorrelationSeries& b)
{
    if (a.values.size() != b.values.size() || a.dt != b.dt)
    {
        throw Error(ErrorKind::InvalidConfig, "series to combine differ in length or step");
    }
    SplitSeries out;
    out.mean = a;
    out.mean.n_samples = a.n_samples + b.n_samples;
    out.noise.resize(a.values.size());
    for (std::size_t m = 0; m < a.values.size(); ++m)
    {
        out.mean.values[m] = 0.5 * (a.values[m] + b.values[m]);
        out.noise[m] = 0.5 * (a.values[m] - b.values[m]);
        if (m < a.std_error.size() && m < b.std_error.size())
        {
            out.mean.std_error[m] = 0.5 * std::hypot(a.std_error[m], b.std_error[m]);
        }
    }
    return out;
}

void write_series_csv(const std::string& path, const CorrelationSeries& series)
{
    std::ofstream out(path);
    if (!out)
    {
        throw Error(ErrorKind::Io, "cannot write " + path);
    }
    out.precision(17);
    out << "t,C,stderr\n";
    for (std::size_t m = 0; m < series.values.size(); ++m)
    {
        out << series.time(m) << ',' << series.values[m] << ',' << series.std_error[m] << '\n';
    }
    if (!out)
    {
        throw Error(ErrorKind::Io, "failed writing " + path);
    }
}

CorrelationSeries read_series_csv(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
    {
        throw Error(ErrorKind::Io, "cannot open series file " + path);
    }
    CorrelationSeries s;
    std::string line;
    std::getline(in, line);
    std::vector<double> t;
    while (std::getline(in, line))
    {
        if (line.empty())
        {
            continue;
        }
        std::stringstream ls(line);
        std::string a;
        std::string b;
        std::string c;
        std::getline(ls, a, ',');
        std::getline(ls, b, ',');
        std::getline(ls, c, ',');
        try
        {
            t.push_back(std::stod(a));
            s.values.push_back(std::stod(b));
            s.std_error.push_back(c.empty() ? 0.0 : std::stod(c));
        }
        catch (const std::exception&)
        {
            throw Error(ErrorKind::InvalidConfig, "malformed series line: " + line);
        }
    }
    if (t.size() < 2)
    {
        throw Error(ErrorKind::InvalidConfig, "series needs at least two points");
    }
    s.dt = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
    for (std::size_t m = 1; m < t.size(); ++m)
    {
        if (std::abs(t[m] - t[m - 1] - s.dt) > 1e-9 * std::max(1.0, s.dt))
        {
            throw Error(ErrorKind::InvalidConfig, "series times are not uniformly spaced");
        }
    }
    return s;
}

std::string modes_to_json(const ModeSet& modes, double dt)
{
    nlohmann::json j;
    j["dt"] = dt;
    j["rank"] = modes.rank;
    j["residual_norm"] = modes.residual_norm;
    j["signal_norm"] = modes.signal_norm;
    j["aliasing_warning"] = modes.aliasing_warning;
    j["singular_values"] = modes.singular_values.size() > 64
                               ? std::vector<double>(modes.singular_values.begin(), modes.singular_values.begin() + 64)
                               : modes.singular_values;
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& m : modes.modes)
    {
        arr.push_back({{"re", m.z.real()},
                       {"im", m.z.imag()},
                       {"amp_re", m.amplitude.real()},
                       {"amp_im", m.amplitude.imag()},
                       {"band", nullptr},
                       {"provenance", "inverted"},
                       {"aliased", m.aliased}});
    }
    j["modes"] = arr;
    return j.dump(1) + "\n";
}

} // namespace rplab
