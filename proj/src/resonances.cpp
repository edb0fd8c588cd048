#include "rplab/resonances.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "rplab/config.hpp"
#include "rplab/error.hpp"
#include "rplab/liouville.hpp"

namespace rplab
{

void LaplaceSpectrum::validate() const
{
    if (!(area > 0.0))
    {
        throw Error(ErrorKind::InvalidConfig, "spectrum area must be positive");
    }
    if (mu.empty() || mu.front() != 0.0)
    {
        throw Error(ErrorKind::InvalidConfig, "spectrum must start with mu_0 = 0");
    }
    for (std::size_t l = 1; l < mu.size(); ++l)
    {
        if (!(mu[l] >= mu[l - 1]))
        {
            throw Error(ErrorKind::InvalidConfig, "spectrum must be sorted and non-negative");
        }
    }
}

ResonanceList resonances_from_laplacian(const LaplaceSpectrum& spec, int k_max, int n_max)
{
    spec.validate();
    if (k_max < 0 || n_max < 0)
    {
        throw Error(ErrorKind::InvalidConfig, "k_max and n_max must be non-negative");
    }
    ResonanceList out;
    out.reserve(2 * spec.mu.size() * static_cast<std::size_t>(k_max + 1) + static_cast<std::size_t>(n_max));
    for (int k = 0; k <= k_max; ++k)
    {
        const double re = -0.5 - k;
        for (std::size_t l = 0; l < spec.mu.size(); ++l)
        {
            const double mu = spec.mu[l];
            const auto level = static_cast<long>(l);
            if (mu >= 0.25)
            {
                const double im = std::sqrt(mu - 0.25);
                out.push_back({cplx(re, im), ResonanceFamily::Band, k, level, Provenance::Analytic});
                out.push_back({cplx(re, -im), ResonanceFamily::Band, k, level, Provenance::Analytic});
            }
            else
            {
                const double s = std::sqrt(0.25 - mu);
                out.push_back({cplx(re + s, 0.0), ResonanceFamily::Exceptional, k, level, Provenance::Analytic});
                out.push_back({cplx(re - s, 0.0), ResonanceFamily::Exceptional, k, level, Provenance::Analytic});
            }
        }
    }
    for (int n = 1; n <= n_max; ++n)
    {
        out.push_back({cplx(-static_cast<double>(n), 0.0), ResonanceFamily::Integer, n, -1, Provenance::Analytic});
    }
    return out;
}

LaplaceSpectrum synthetic_weyl_spectrum(double area, double mu_max, double jitter, std::uint64_t seed)
{
    if (!(area > 0.0) || !(mu_max > 0.0))
    {
        throw Error(ErrorKind::InvalidConfig, "synthetic spectrum needs area > 0 and mu_max > 0");
    }
    if (!(jitter >= 0.0 && jitter <= 1.0))
    {
        throw Error(ErrorKind::InvalidConfig, "jitter must lie in [0, 1]");
    }
    LaplaceSpectrum spec;
    spec.area = area;
    spec.source = "synthetic";
    spec.mu.push_back(0.0);
    const double unit = 4.0 * pi / area;
    SampleRng rng(seed);
    for (long l = 1;; ++l)
    {
        // 53 random bits, independent of the standard library's distributions.
        const double xi = static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5;
        const double mu = (static_cast<double>(l) + jitter * xi) * unit;
        if (mu > mu_max)
        {
            break;
        }
        spec.mu.push_back(mu);
    }
    std::sort(spec.mu.begin() + 1, spec.mu.end());
    return spec;
}

bool conjugation_closed(const ResonanceList& list, double tol)
{
    std::vector<cplx> upper;
    std::vector<cplx> lower;
    for (const auto& r : list)
    {
        if (std::abs(r.z.imag()) <= tol)
        {
            continue;
        }
        (r.z.imag() > 0 ? upper : lower).push_back(r.z);
    }
    if (upper.size() != lower.size())
    {
        return false;
    }
    auto key = [](cplx a, cplx b) { return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag(); };
    for (auto& z : lower)
    {
        z = std::conj(z);
    }
    std::sort(upper.begin(), upper.end(), key);
    std::sort(lower.begin(), lower.end(), key);
    std::vector<char> used(lower.size(), 0);
    // Greedy matching within tol (lists are small or already paired).
    for (const cplx& z : upper)
    {
        bool found = false;
        auto it = std::lower_bound(lower.begin(), lower.end(), cplx(z.real() - tol, -1e300), key);
        for (auto j = static_cast<std::size_t>(it - lower.begin()); j < lower.size(); ++j)
        {
            if (lower[j].real() > z.real() + tol)
            {
                break;
            }
            if (!used[j] && std::abs(lower[j] - z) <= tol)
            {
                used[j] = 1;
                found = true;
                break;
            }
        }
        if (!found)
        {
            return false;
        }
    }
    return true;
}

LaplaceSpectrum read_spectrum_csv(const std::string& path, std::optional<double> area)
{
    std::ifstream in(path);
    if (!in)
    {
        throw Error(ErrorKind::Io, "cannot open spectrum file " + path);
    }
    LaplaceSpectrum spec;
    spec.source = "file";
    std::string line;
    if (!std::getline(in, line))
    {
        throw Error(ErrorKind::InvalidConfig, "empty spectrum file " + path);
    }
    while (std::getline(in, line))
    {
        if (line.empty() || line[0] == '#')
        {
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos)
        {
            throw Error(ErrorKind::InvalidConfig, "malformed spectrum line: " + line);
        }
        try
        {
            spec.mu.push_back(std::stod(line.substr(comma + 1)));
        }
        catch (const std::exception&)
        {
            throw Error(ErrorKind::InvalidConfig, "malformed spectrum line: " + line);
        }
    }
    if (area)
    {
        spec.area = *area;
    }
    else
    {
        std::ifstream meta(path + ".meta");
        if (!meta)
        {
            throw Error(ErrorKind::InvalidConfig, "spectrum area missing: no " + path + ".meta and no --area");
        }
        const KeyValueConfig cfg = KeyValueConfig::load(path + ".meta");
        if (!cfg.has("area"))
        {
            throw Error(ErrorKind::InvalidConfig, "spectrum sidecar lacks the area key");
        }
        spec.area = cfg.get_double("area", 0.0);
    }
    spec.validate();
    return spec;
}

void write_spectrum_csv(const std::string& path, const LaplaceSpectrum& spec)
{
    std::ofstream out(path);
    if (!out)
    {
        throw Error(ErrorKind::Io, "cannot write " + path);
    }
    out.precision(17);
    out << "index,mu\n";
    for (std::size_t l = 0; l < spec.mu.size(); ++l)
    {
        out << l << ',' << spec.mu[l] << '\n';
    }
    std::ofstream meta(path + ".meta");
    meta.precision(17);
    meta << "area = " << spec.area << '\n';
    if (!out || !meta)
    {
        throw Error(ErrorKind::Io, "failed writing " + path);
    }
}

std::string to_string(Provenance p)
{
    return p == Provenance::Analytic ? "analytic" : "inverted";
}

std::string resonances_to_json(const ResonanceList& list)
{
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : list)
    {
        nlohmann::json e;
        e["re"] = r.z.real();
        e["im"] = r.z.imag();
        switch (r.family)
        {
        case ResonanceFamily::Band:
            e["band"] = r.band;
            break;
        case ResonanceFamily::Exceptional:
            e["band"] = "exceptional";
            e["k"] = r.band;
            break;
        case ResonanceFamily::Integer:
            e["band"] = "integer";
            break;
        case ResonanceFamily::Unassigned:
            e["band"] = nullptr;
            break;
        }
        if (r.level >= 0)
        {
            e["level"] = r.level;
        }
        e["provenance"] = to_string(r.provenance);
        arr.push_back(std::move(e));
    }
    return arr.dump(1) + "\n";
}

ResonanceList resonances_from_json(const std::string& text)
{
    ResonanceList out;
    nlohmann::json arr;
    try
    {
        arr = nlohmann::json::parse(text);
        if (arr.is_object() && arr.contains("modes"))
        {
            arr = arr["modes"];
        }
        if (!arr.is_array())
        {
            throw Error(ErrorKind::InvalidConfig, "resonance JSON must be an array");
        }
        for (const auto& e : arr)
        {
            Resonance r;
            r.z = cplx(e.at("re").get<double>(), e.at("im").get<double>());
            const auto& b = e.contains("band") ? e["band"] : nlohmann::json();
            if (b.is_number_integer())
            {
                r.family = ResonanceFamily::Band;
                r.band = b.get<int>();
            }
            else if (b.is_string() && b.get<std::string>() == "exceptional")
            {
                r.family = ResonanceFamily::Exceptional;
                r.band = e.value("k", 0);
            }
            else if (b.is_string() && b.get<std::string>() == "integer")
            {
                r.family = ResonanceFamily::Integer;
                r.band = static_cast<int>(std::lround(-r.z.real()));
            }
            else
            {
                r.family = ResonanceFamily::Unassigned;
            }
            r.level = e.value("level", -1L);
            r.provenance = e.value("provenance", std::string("analytic")) == "inverted" ? Provenance::Inverted
                                                                                          : Provenance::Analytic;
            out.push_back(r);
        }
    }
    catch (const nlohmann::json::exception& ex)
    {
        throw Error(ErrorKind::InvalidConfig, std::string("malformed resonance JSON: ") + ex.what());
    }
    return out;
}

} // namespace rplab
