#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "epv/pitch.hpp"
#include "epv/possession.hpp"

namespace epv {

struct ValuationConfig {
    double gamma = 1.0;  // discount per play, in (0, 1]

    void validate() const;
};

/// Discounted return credited to play t (1-based) of a possession:
/// gamma^(T - t) * reward. The final play is undiscounted.
double play_return(const Possession& possession, int t, double gamma);

/// Per-zone returns G_m(s) and visit counts for one team in one match.
struct MatchReturnMatrix {
    std::string match_id;
    std::string team_id;
    std::string system_label;
    std::vector<double> returns;    // index = zone id - 1
    std::vector<long long> visits;  // every-visit play counts

    int zone_count() const { return static_cast<int>(returns.size()); }
    double total() const;
};

MatchReturnMatrix match_returns(std::span<const Possession> possessions, const ZoneSystem& system,
                                const ValuationConfig& config);

/// One matrix per (match, team), in order of first appearance.
std::vector<MatchReturnMatrix> all_match_returns(std::span<const Possession> possessions, const ZoneSystem& system,
                                                 const ValuationConfig& config);

/// Per-zone expected possession value. Zones never visited hold no value.
struct EPVModel {
    ZoneSystem system;
    double gamma = 1.0;
    std::vector<std::optional<double>> values;  // index = zone id - 1
    std::vector<long long> visits;

    int zone_count() const { return static_cast<int>(values.size()); }
};

/// Every-visit Monte Carlo accumulator. Sums are taken in possession order,
/// play order, so results do not depend on how the input was batched.
class EpvAccumulator {
public:
    EpvAccumulator(const ZoneSystem& system, ValuationConfig config);

    void add(const Possession& possession);
    EPVModel finish() const;

    std::span<const double> sums() const { return sums_; }
    std::span<const long long> visits() const { return visits_; }

private:
    const ZoneSystem* system_;
    ValuationConfig config_;
    std::vector<double> sums_;
    std::vector<long long> visits_;
};

/// EPV(s) = total discounted return over all visits to s / number of visits,
/// pooled over play index.
EPVModel estimate_epv(std::span<const Possession> possessions, const ZoneSystem& system,
                      const ValuationConfig& config);

/// The same estimator split by play index t: element t - 1 only counts plays
/// at position t of their possession.
std::vector<EPVModel> estimate_epv_by_play_index(std::span<const Possession> possessions, const ZoneSystem& system,
                                                 const ValuationConfig& config);

/// Pools per-match matrices (sum of returns / sum of visits).
EPVModel epv_from_matrices(std::span<const MatchReturnMatrix> matrices, const ZoneSystem& system, double gamma);

}  // namespace epv
