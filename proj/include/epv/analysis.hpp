#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "epv/valuation.hpp"

namespace epv {

/// A zone's share of a team's total match return (one match or a pool).
struct RewardDistribution {
    std::string team_id;
    std::vector<std::string> source;  // contributing match ids
    std::string system_label;
    std::vector<double> probs;        // index = zone id - 1, sums to 1
};

RewardDistribution reward_distribution(const MatchReturnMatrix& matrix);

/// Returns are summed across the matches before normalising; this is not the
/// average of the per-match distributions.
RewardDistribution pooled_distribution(std::span<const MatchReturnMatrix* const> matrices);
RewardDistribution pooled_distribution(std::span<const MatchReturnMatrix> matrices);

/// D(p || q) in nats, with p the observed ("true") distribution. Returns
/// +infinity when p puts mass on a zone where q has none.
double kl_divergence(const RewardDistribution& p, const RewardDistribution& q);

/// One team's matches in chronological order.
struct TeamSeason {
    std::string team_id;
    std::vector<MatchReturnMatrix> matches;
};

/// Groups matrices by team, keeping teams and matches in order of first
/// appearance (the feed order is chronological).
std::vector<TeamSeason> team_seasons(std::span<const MatchReturnMatrix> matrices);

struct Comparison {
    std::string target_match;
    std::vector<std::string> window;
    double kl = 0.0;

    bool is_infinite() const;
};

struct ReproReport {
    std::string team_id;
    int k = 0;
    std::vector<Comparison> comparisons;
    double pct_non_infinity = 0.0;
};

struct ReproSummary {
    int k = 0;
    int teams = 0;
    double mean_pct = 0.0;
    double sd_pct = 0.0;  // sample SD across teams; 0 with a single team
};

struct ReproStudy {
    std::vector<ReproReport> reports;          // ordered by (team, k)
    std::vector<ReproSummary> summary;         // one per k
    std::vector<std::string> excluded_matches;  // "team:match" with zero total return
    std::vector<std::string> warnings;
};

/// Reports for one team. Matches whose total return is zero are dropped
/// before windows are formed; N is the count that remains. For each k the
/// k matches preceding each target are pooled and compared against it, so
/// there are N - k comparisons.
ReproReport reproducibility_for_team(const TeamSeason& season, int k);

ReproStudy reproducibility_study(std::span<const TeamSeason> seasons, int k_min = 1, int k_max = 10);

struct ZScoreProfile {
    std::vector<std::string> teams;
    std::string system_label;
    std::vector<std::vector<double>> z;  // [zone][team]
    std::vector<bool> flat;              // zone had zero spread across teams

    int zone_count() const { return static_cast<int>(z.size()); }
};

/// Standardises each zone's share against the league: (p - mean) / sd with
/// the sample SD over teams. Zones with no spread get z = 0 and are flagged.
ZScoreProfile zscore_profile(std::span<const RewardDistribution> season_distributions);

enum class Dependence { very_low, low, typical, high, very_high };

/// +-1 marks high/low and +-2 very high/very low dependence.
Dependence classify_dependence(double z);

}  // namespace epv
