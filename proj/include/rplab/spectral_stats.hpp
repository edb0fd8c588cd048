#ifndef RPLAB_SPECTRAL_STATS_HPP
#define RPLAB_SPECTRAL_STATS_HPP

///
/// \file spectral_stats.hpp
///
/// Statistics of resonance lists against band edges: membership, counting in
/// windows of Im z, and concentration on the line Re z = <D>.
///

#include <optional>
#include <vector>

#include "rplab/band_edges.hpp"
#include "rplab/resonances.hpp"

namespace rplab
{

enum class MembershipStatus
{
    Assigned,  // exactly one enlarged band contains Re z
    Ambiguous, // several enlarged bands contain Re z (first one reported)
    Exempt,    // |Im z| <= c0: allowed exception
    Violation, // outside every enlarged band
};

const char* to_string(MembershipStatus s);

struct Membership
{
    MembershipStatus status = MembershipStatus::Violation;
    int band = -1;
};

struct BandTestReport
{
    std::vector<Membership> entries; // one per input resonance
    std::size_t assigned = 0;        // Assigned + Ambiguous + Exempt
    std::size_t ambiguous = 0;
    std::size_t exempt = 0;
    std::size_t violations = 0;
};

BandTestReport band_membership(const ResonanceList& list, const std::vector<EdgePair>& edges, double eps,
                               double c0 = 5.0);

/// Entries labelled as band k.
bool in_band(const Resonance& r, int k);

/// #{z in band k : b <= Im z < b + b^eps_exponent}.
std::size_t weyl_count(const ResonanceList& list, int k, double b, double eps_exponent = 0.0);

struct WeylFit
{
    std::vector<double> b;
    std::vector<std::size_t> counts;
    bool fitted = false;     // at least 5 ladder points with non-zero counts
    double slope = 0.0;      // d log N / d log b
    double constant = 0.0;   // smallest c with N / b^{1+eps} in [1/c, c]
    double prefactor = 0.0;  // least-squares A in N ~ A b^{1+eps}
};

/// Geometric ladder of n values from b_min to b_max.
std::vector<double> geometric_ladder(double b_min, double b_max, int n);

WeylFit weyl_fit(const ResonanceList& list, int k, const std::vector<double>& ladder, double eps_exponent = 0.0);

struct ConcentrationPoint
{
    double b = 0.0;
    std::size_t n = 0;
    std::optional<double> statistic; // empty when B_b is empty
};

struct ConcentrationReport
{
    std::vector<ConcentrationPoint> points;
    bool nonincreasing = true; // over the defined points
};

///
/// Mean of |Re z - d_mean| over band-0 entries with |Im z| < b, for each b of
/// the ladder.
///
ConcentrationReport concentration(const ResonanceList& list, double d_mean, const std::vector<double>& ladder);

} // namespace rplab

#endif // RPLAB_SPECTRAL_STATS_HPP
