#include "epv/valuation.hpp"

#include <cmath>
#include <map>
#include <numeric>
#include <utility>

#include "epv/errors.hpp"

namespace epv {

void ValuationConfig::validate() const {
    if (!(gamma > 0.0 && gamma <= 1.0)) {
        throw ConfigError("gamma must lie in (0, 1], got " + std::to_string(gamma));
    }
}

double play_return(const Possession& possession, int t, double gamma) {
    const int T = possession.length();
    if (t < 1 || t > T) {
        throw ContractViolation("play index " + std::to_string(t) + " outside 1.." + std::to_string(T));
    }
    if (possession.reward == 0) return 0.0;
    return std::pow(gamma, T - t) * possession.reward;
}

double MatchReturnMatrix::total() const { return std::accumulate(returns.begin(), returns.end(), 0.0); }

MatchReturnMatrix match_returns(std::span<const Possession> possessions, const ZoneSystem& system,
                                const ValuationConfig& config) {
    config.validate();
    MatchReturnMatrix m;
    m.system_label = system.label();
    m.returns.assign(static_cast<std::size_t>(system.zone_count()), 0.0);
    m.visits.assign(static_cast<std::size_t>(system.zone_count()), 0);
    if (possessions.empty()) return m;

    m.match_id = possessions.front().match_id;
    m.team_id = possessions.front().team_id;
    for (const auto& p : possessions) {
        if (p.match_id != m.match_id || p.team_id != m.team_id) {
            throw ContractViolation("match_returns() expects one team in one match, found " + m.match_id + "/" +
                                    m.team_id + " and " + p.match_id + "/" + p.team_id);
        }
        for (int t = 1; t <= p.length(); ++t) {
            const auto& play = p.plays[static_cast<std::size_t>(t - 1)];
            const auto z = static_cast<std::size_t>(system.zone_of(play.x, play.y).index - 1);
            m.returns[z] += play_return(p, t, config.gamma);
            m.visits[z] += 1;
        }
    }
    return m;
}

std::vector<MatchReturnMatrix> all_match_returns(std::span<const Possession> possessions, const ZoneSystem& system,
                                                 const ValuationConfig& config) {
    std::vector<std::pair<std::string, std::string>> keys;
    std::map<std::pair<std::string, std::string>, std::vector<Possession>> groups;
    for (const auto& p : possessions) {
        auto key = std::make_pair(p.match_id, p.team_id);
        auto [it, inserted] = groups.try_emplace(key);
        if (inserted) keys.push_back(key);
        it->second.push_back(p);
    }
    std::vector<MatchReturnMatrix> out;
    out.reserve(keys.size());
    for (const auto& key : keys) out.push_back(match_returns(groups[key], system, config));
    return out;
}

EpvAccumulator::EpvAccumulator(const ZoneSystem& system, ValuationConfig config)
    : system_(&system),
      config_(config),
      sums_(static_cast<std::size_t>(system.zone_count()), 0.0),
      visits_(static_cast<std::size_t>(system.zone_count()), 0) {
    config_.validate();
}

void EpvAccumulator::add(const Possession& possession) {
    for (int t = 1; t <= possession.length(); ++t) {
        const auto& play = possession.plays[static_cast<std::size_t>(t - 1)];
        const auto z = static_cast<std::size_t>(system_->zone_of(play.x, play.y).index - 1);
        sums_[z] += play_return(possession, t, config_.gamma);
        visits_[z] += 1;
    }
}

EPVModel EpvAccumulator::finish() const {
    EPVModel model{*system_, config_.gamma, {}, visits_};
    model.values.resize(sums_.size());
    for (std::size_t z = 0; z < sums_.size(); ++z) {
        if (visits_[z] > 0) model.values[z] = sums_[z] / static_cast<double>(visits_[z]);
    }
    return model;
}

EPVModel estimate_epv(std::span<const Possession> possessions, const ZoneSystem& system,
                      const ValuationConfig& config) {
    if (possessions.empty()) throw ContractViolation("estimate_epv() needs at least one possession");
    EpvAccumulator acc(system, config);
    for (const auto& p : possessions) acc.add(p);
    return acc.finish();
}

std::vector<EPVModel> estimate_epv_by_play_index(std::span<const Possession> possessions, const ZoneSystem& system,
                                                 const ValuationConfig& config) {
    config.validate();
    const auto n = static_cast<std::size_t>(system.zone_count());
    std::vector<std::vector<double>> sums;
    std::vector<std::vector<long long>> visits;
    for (const auto& p : possessions) {
        for (int t = 1; t <= p.length(); ++t) {
            const auto ti = static_cast<std::size_t>(t - 1);
            if (sums.size() <= ti) {
                sums.resize(ti + 1, std::vector<double>(n, 0.0));
                visits.resize(ti + 1, std::vector<long long>(n, 0));
            }
            const auto& play = p.plays[ti];
            const auto z = static_cast<std::size_t>(system.zone_of(play.x, play.y).index - 1);
            sums[ti][z] += play_return(p, t, config.gamma);
            visits[ti][z] += 1;
        }
    }
    std::vector<EPVModel> out;
    for (std::size_t t = 0; t < sums.size(); ++t) {
        EPVModel m{system, config.gamma, std::vector<std::optional<double>>(n), visits[t]};
        for (std::size_t z = 0; z < n; ++z) {
            if (visits[t][z] > 0) m.values[z] = sums[t][z] / static_cast<double>(visits[t][z]);
        }
        out.push_back(std::move(m));
    }
    return out;
}

EPVModel epv_from_matrices(std::span<const MatchReturnMatrix> matrices, const ZoneSystem& system, double gamma) {
    const auto n = static_cast<std::size_t>(system.zone_count());
    std::vector<double> sums(n, 0.0);
    std::vector<long long> visits(n, 0);
    for (const auto& m : matrices) {
        if (m.returns.size() != n || m.system_label != system.label()) {
            throw ContractViolation("match return matrix is not on system " + system.label());
        }
        for (std::size_t z = 0; z < n; ++z) {
            sums[z] += m.returns[z];
            visits[z] += m.visits[z];
        }
    }
    EPVModel model{system, gamma, std::vector<std::optional<double>>(n), visits};
    for (std::size_t z = 0; z < n; ++z) {
        if (visits[z] > 0) model.values[z] = sums[z] / static_cast<double>(visits[z]);
    }
    return model;
}

}  // namespace epv
