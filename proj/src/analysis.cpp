#include "epv/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "epv/errors.hpp"

namespace epv {

namespace {

RewardDistribution normalise(std::string team, std::vector<std::string> source, std::string label,
                             std::vector<double> returns) {
    const double total = std::accumulate(returns.begin(), returns.end(), 0.0);
    if (!(total > 0.0)) {
        std::string ids;
        for (const auto& s : source) ids += (ids.empty() ? "" : ",") + s;
        throw ZeroReturnMatch("team " + team + " has zero total return over [" + ids + "]");
    }
    for (double& v : returns) v /= total;
    return RewardDistribution{std::move(team), std::move(source), std::move(label), std::move(returns)};
}

double mean_of(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_sd(const std::vector<double>& v, double mean) {
    if (v.size() < 2) return 0.0;
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

}  // namespace

RewardDistribution reward_distribution(const MatchReturnMatrix& matrix) {
    return normalise(matrix.team_id, {matrix.match_id}, matrix.system_label, matrix.returns);
}

RewardDistribution pooled_distribution(std::span<const MatchReturnMatrix* const> matrices) {
    if (matrices.empty()) throw ContractViolation("pooled_distribution() needs at least one match");
    const auto& first = *matrices.front();
    std::vector<double> pooled(first.returns.size(), 0.0);
    std::vector<std::string> source;
    for (const auto* m : matrices) {
        if (m->team_id != first.team_id) throw ContractViolation("pooled matches belong to different teams");
        if (m->system_label != first.system_label || m->returns.size() != pooled.size()) {
            throw ContractViolation("pooled matches use different zone systems");
        }
        for (std::size_t z = 0; z < pooled.size(); ++z) pooled[z] += m->returns[z];
        source.push_back(m->match_id);
    }
    return normalise(first.team_id, std::move(source), first.system_label, std::move(pooled));
}

RewardDistribution pooled_distribution(std::span<const MatchReturnMatrix> matrices) {
    std::vector<const MatchReturnMatrix*> ptrs;
    ptrs.reserve(matrices.size());
    for (const auto& m : matrices) ptrs.push_back(&m);
    return pooled_distribution(std::span<const MatchReturnMatrix* const>(ptrs));
}

double kl_divergence(const RewardDistribution& p, const RewardDistribution& q) {
    if (p.system_label != q.system_label || p.probs.size() != q.probs.size()) {
        throw ContractViolation("KL divergence between distributions on different zone systems");
    }
    double d = 0.0;
    for (std::size_t s = 0; s < p.probs.size(); ++s) {
        const double ps = p.probs[s];
        if (ps <= 0.0) continue;
        const double qs = q.probs[s];
        if (qs <= 0.0) return std::numeric_limits<double>::infinity();
        d += ps * std::log(ps / qs);
    }
    return d;
}

std::vector<TeamSeason> team_seasons(std::span<const MatchReturnMatrix> matrices) {
    std::vector<TeamSeason> out;
    std::map<std::string, std::size_t> index;
    for (const auto& m : matrices) {
        auto [it, inserted] = index.try_emplace(m.team_id, out.size());
        if (inserted) out.push_back(TeamSeason{m.team_id, {}});
        out[it->second].matches.push_back(m);
    }
    return out;
}

bool Comparison::is_infinite() const { return std::isinf(kl); }

ReproReport reproducibility_for_team(const TeamSeason& season, int k) {
    if (k < 1) throw ContractViolation("window length must be at least 1");
    ReproReport report{season.team_id, k, {}, 0.0};

    std::vector<const MatchReturnMatrix*> usable;
    for (const auto& m : season.matches) {
        if (m.total() > 0.0) usable.push_back(&m);
    }
    const auto n = usable.size();
    const auto ku = static_cast<std::size_t>(k);
    if (n <= ku) return report;

    std::size_t finite = 0;
    for (std::size_t target = ku; target < n; ++target) {
        std::span<const MatchReturnMatrix* const> window(usable.data() + (target - ku), ku);
        const auto q = pooled_distribution(window);
        const auto p = reward_distribution(*usable[target]);
        Comparison c{usable[target]->match_id, q.source, kl_divergence(p, q)};
        if (!c.is_infinite()) ++finite;
        report.comparisons.push_back(std::move(c));
    }
    report.pct_non_infinity = 100.0 * static_cast<double>(finite) / static_cast<double>(report.comparisons.size());
    return report;
}

ReproStudy reproducibility_study(std::span<const TeamSeason> seasons, int k_min, int k_max) {
    if (k_min < 1 || k_max < k_min) throw ConfigError("window range must satisfy 1 <= k_min <= k_max");
    ReproStudy study;
    for (const auto& season : seasons) {
        for (const auto& m : season.matches) {
            if (!(m.total() > 0.0)) study.excluded_matches.push_back(season.team_id + ":" + m.match_id);
        }
    }
    std::map<int, std::vector<double>> pct_by_k;
    for (const auto& season : seasons) {
        for (int k = k_min; k <= k_max; ++k) {
            auto report = reproducibility_for_team(season, k);
            if (report.comparisons.empty()) {
                study.warnings.push_back("team " + season.team_id + " skipped for k = " + std::to_string(k) +
                                         ": not enough matches with a non-zero return");
                continue;
            }
            pct_by_k[k].push_back(report.pct_non_infinity);
            study.reports.push_back(std::move(report));
        }
    }
    for (int k = k_min; k <= k_max; ++k) {
        ReproSummary s{k, 0, 0.0, 0.0};
        auto it = pct_by_k.find(k);
        if (it != pct_by_k.end()) {
            s.teams = static_cast<int>(it->second.size());
            s.mean_pct = mean_of(it->second);
            s.sd_pct = sample_sd(it->second, s.mean_pct);
        }
        study.summary.push_back(s);
    }
    return study;
}

ZScoreProfile zscore_profile(std::span<const RewardDistribution> season_distributions) {
    if (season_distributions.size() < 2) throw InsufficientTeams("z-scores need at least two teams");
    const auto& first = season_distributions.front();
    const std::size_t n_zones = first.probs.size();
    ZScoreProfile out;
    out.system_label = first.system_label;
    for (const auto& d : season_distributions) {
        if (d.system_label != first.system_label || d.probs.size() != n_zones) {
            throw ContractViolation("z-score distributions use different zone systems");
        }
        out.teams.push_back(d.team_id);
    }
    out.z.assign(n_zones, std::vector<double>(season_distributions.size(), 0.0));
    out.flat.assign(n_zones, false);
    std::vector<double> column(season_distributions.size());
    for (std::size_t s = 0; s < n_zones; ++s) {
        for (std::size_t t = 0; t < column.size(); ++t) column[t] = season_distributions[t].probs[s];
        // Equal shares can still give a rounding-sized sd, so test the values.
        if (std::all_of(column.begin(), column.end(), [&](double v) { return v == column.front(); })) {
            out.flat[s] = true;
            continue;
        }
        const double mean = mean_of(column);
        const double sd = sample_sd(column, mean);
        if (sd == 0.0) {
            out.flat[s] = true;
            continue;
        }
        for (std::size_t t = 0; t < column.size(); ++t) out.z[s][t] = (column[t] - mean) / sd;
    }
    return out;
}

Dependence classify_dependence(double z) {
    if (z >= 2.0) return Dependence::very_high;
    if (z >= 1.0) return Dependence::high;
    if (z <= -2.0) return Dependence::very_low;
    if (z <= -1.0) return Dependence::low;
    return Dependence::typical;
}

}  // namespace epv
