#include "rplab/spectral_stats.hpp"

#include <cmath>

#include "rplab/error.hpp"

namespace rplab
{

const char* to_string(MembershipStatus s)
{
    switch (s)
    {
    case MembershipStatus::Assigned:
        return "assigned";
    case MembershipStatus::Ambiguous:
        return "ambiguous";
    case MembershipStatus::Exempt:
        return "exempt";
    case MembershipStatus::Violation:
        return "violation";
    }
    return "unknown";
}

BandTestReport band_membership(const ResonanceList& list, const std::vector<EdgePair>& edges, double eps,
                               double c0)
{
    BandTestReport rep;
    rep.entries.reserve(list.size());
    for (const auto& r : list)
    {
        Membership m;
        if (std::abs(r.z.imag()) <= c0)
        {
            m.status = MembershipStatus::Exempt;
            ++rep.exempt;
        }
        else
        {
            int hits = 0;
            for (std::size_t k = 0; k < edges.size(); ++k)
            {
                const double re = r.z.real();
                if (re >= edges[k].gamma_minus - eps && re <= edges[k].gamma_plus + eps)
                {
                    if (hits == 0)
                    {
                        m.band = static_cast<int>(k);
                    }
                    ++hits;
                }
            }
            if (hits == 0)
            {
                m.status = MembershipStatus::Violation;
            }
            else if (hits == 1)
            {
                m.status = MembershipStatus::Assigned;
            }
            else
            {
                m.status = MembershipStatus::Ambiguous;
                ++rep.ambiguous;
            }
        }
        if (m.status == MembershipStatus::Violation)
        {
            ++rep.violations;
        }
        else
        {
            ++rep.assigned;
        }
        rep.entries.push_back(m);
    }
    return rep;
}

bool in_band(const Resonance& r, int k)
{
    return r.family == ResonanceFamily::Band && r.band == k;
}

std::size_t weyl_count(const ResonanceList& list, int k, double b, double eps_exponent)
{
    const double width = std::pow(b, eps_exponent);
    std::size_t n = 0;
    for (const auto& r : list)
    {
        if (in_band(r, k) && r.z.imag() >= b && r.z.imag() < b + width)
        {
            ++n;
        }
    }
    return n;
}

std::vector<double> geometric_ladder(double b_min, double b_max, int n)
{
    if (!(b_min > 0.0) || !(b_max > b_min) || n < 2)
    {
        throw Error(ErrorKind::InvalidConfig, "ladder needs 0 < b_min < b_max and at least two points");
    }
    std::vector<double> out;
    for (int j = 0; j < n; ++j)
    {
        out.push_back(b_min * std::pow(b_max / b_min, static_cast<double>(j) / (n - 1)));
    }
    return out;
}

WeylFit weyl_fit(const ResonanceList& list, int k, const std::vector<double>& ladder, double eps_exponent)
{
    WeylFit fit;
    fit.b = ladder;
    std::vector<double> lx;
    std::vector<double> ly;
    double sab = 0.0;
    double sbb = 0.0;
    for (double b : ladder)
    {
        const std::size_t n = weyl_count(list, k, b, eps_exponent);
        fit.counts.push_back(n);
        if (n > 0 && b > 0.0)
        {
            lx.push_back(std::log(b));
            ly.push_back(std::log(static_cast<double>(n)));
        }
        const double scale = std::pow(b, 1.0 + eps_exponent);
        sab += static_cast<double>(n) * scale;
        sbb += scale * scale;
    }
    if (lx.size() < 5)
    {
        return fit;
    }
    fit.fitted = true;
    const auto m = static_cast<double>(lx.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i)
    {
        mx += lx[i] / m;
        my += ly[i] / m;
    }
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i)
    {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    fit.slope = sxy / sxx;
    fit.prefactor = sab / sbb;
    fit.constant = 1.0;
    for (std::size_t j = 0; j < ladder.size(); ++j)
    {
        if (fit.counts[j] == 0)
        {
            continue;
        }
        const double ratio = static_cast<double>(fit.counts[j]) / std::pow(ladder[j], 1.0 + eps_exponent);
        fit.constant = std::max(fit.constant, std::max(ratio, 1.0 / ratio));
    }
    return fit;
}

ConcentrationReport concentration(const ResonanceList& list, double d_mean, const std::vector<double>& ladder)
{
    ConcentrationReport rep;
    std::optional<double> prev;
    for (double b : ladder)
    {
        ConcentrationPoint p;
        p.b = b;
        double sum = 0.0;
        for (const auto& r : list)
        {
            if (in_band(r, 0) && std::abs(r.z.imag()) < b)
            {
                sum += std::abs(r.z.real() - d_mean);
                ++p.n;
            }
        }
        if (p.n > 0)
        {
            p.statistic = sum / static_cast<double>(p.n);
            if (prev && *p.statistic > *prev)
            {
                rep.nonincreasing = false;
            }
            prev = p.statistic;
        }
        rep.points.push_back(p);
    }
    return rep;
}

} // namespace rplab
