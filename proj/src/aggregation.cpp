#include "epv/aggregation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <numeric>

#include <boost/math/distributions/students_t.hpp>

#include "epv/errors.hpp"

namespace epv {

namespace {

constexpr int kColumns5 = 14;
constexpr int kRows5 = 22;

void check_partition(const MergePartition& partition, std::size_t n_units, const char* what) {
    int expected = 1;
    for (const auto& g : partition.groups) {
        if (g.empty()) throw ContractViolation(std::string(what) + " partition has an empty group");
        for (int u : g) {
            if (u != expected) throw ContractViolation(std::string(what) + " partition is not contiguous");
            ++expected;
        }
    }
    if (static_cast<std::size_t>(expected - 1) != n_units) {
        throw ContractViolation(std::string(what) + " partition does not cover every unit");
    }
}

}  // namespace

MarginalReturns marginal_returns(std::span<const MatchReturnMatrix> matrices) {
    const GridZoneSystem grid = build_grid(5.0);
    MarginalReturns out;
    out.columns.resize(kColumns5);
    out.rows.resize(kRows5);
    out.row_visits.resize(kRows5);
    for (int c = 0; c < kColumns5; ++c) out.columns[static_cast<std::size_t>(c)] = {Axis::column, c + 1, {}};
    for (int r = 0; r < kRows5; ++r) out.rows[static_cast<std::size_t>(r)] = {Axis::row, r + 1, {}};

    for (const auto& m : matrices) {
        if (m.system_label != "grid5" || m.zone_count() != grid.zone_count()) {
            throw ContractViolation("marginal returns need 5m grid matrices, got '" + m.system_label + "'");
        }
        out.keys.push_back({m.match_id, m.team_id});
        std::vector<double> col(kColumns5, 0.0);
        std::vector<double> row(kRows5, 0.0);
        std::vector<long long> row_visits(kRows5, 0);
        for (int z = 1; z <= grid.zone_count(); ++z) {
            auto [c, r] = grid.cell_of(ZoneId{z});
            const auto zi = static_cast<std::size_t>(z - 1);
            col[static_cast<std::size_t>(c - 1)] += m.returns[zi];
            row[static_cast<std::size_t>(r - 1)] += m.returns[zi];
            row_visits[static_cast<std::size_t>(r - 1)] += m.visits[zi];
        }
        for (std::size_t c = 0; c < col.size(); ++c) out.columns[c].values.push_back(col[c]);
        for (std::size_t r = 0; r < row.size(); ++r) {
            out.rows[r].values.push_back(row[r]);
            out.row_visits[r].push_back(row_visits[r]);
        }
    }
    return out;
}

FoldedReturns fold_and_pair(const MarginalReturns& marginals, bool fold_columns) {
    const std::size_t n_obs = marginals.keys.size();
    FoldedReturns out;
    out.keys = marginals.keys;

    const int n_cols = static_cast<int>(marginals.columns.size());
    if (fold_columns) {
        for (int c = 1; c <= (n_cols + 1) / 2; ++c) {
            const auto mc = mirror_class(c, n_cols);
            AxisUnit unit;
            unit.members = {mc.member_columns.first};
            if (mc.member_columns.second != mc.member_columns.first) unit.members.push_back(mc.member_columns.second);
            unit.values.assign(n_obs, 0.0);
            for (int member : unit.members) {
                const auto& v = marginals.columns[static_cast<std::size_t>(member - 1)].values;
                for (std::size_t i = 0; i < n_obs; ++i) unit.values[i] += v[i];
            }
            out.columns.push_back(std::move(unit));
        }
    } else {
        for (int c = 1; c <= n_cols; ++c) {
            out.columns.push_back({{c}, marginals.columns[static_cast<std::size_t>(c - 1)].values});
        }
    }

    const int n_rows = static_cast<int>(marginals.rows.size());
    for (int r = 1; r <= n_rows; r += 2) {
        AxisUnit unit;
        std::vector<long long> visits(n_obs, 0);
        unit.values.assign(n_obs, 0.0);
        for (int member = r; member <= std::min(r + 1, n_rows); ++member) {
            unit.members.push_back(member);
            const auto idx = static_cast<std::size_t>(member - 1);
            for (std::size_t i = 0; i < n_obs; ++i) {
                unit.values[i] += marginals.rows[idx].values[i];
                if (idx < marginals.row_visits.size()) visits[i] += marginals.row_visits[idx][i];
            }
        }
        out.rows.push_back(std::move(unit));
        out.row_visits.push_back(std::move(visits));
    }
    return out;
}

void MinimalEffectConfig::validate() const {
    if (!(threshold > 0.0)) throw ConfigError("minimal-effect threshold must be positive");
    if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
}

MinimalEffectResult minimal_effect_test(std::span<const double> a, std::span<const double> b,
                                        const MinimalEffectConfig& config) {
    config.validate();
    if (a.size() != b.size()) throw ContractViolation("paired series differ in length");
    MinimalEffectResult r;
    r.n = a.size();
    if (r.n < 2) throw InsufficientData("minimal-effects test needs at least two paired observations");

    const double n = static_cast<double>(r.n);
    double sum = 0.0;
    for (std::size_t i = 0; i < r.n; ++i) sum += a[i] - b[i];
    r.mean_diff = sum / n;
    double ss = 0.0;
    for (std::size_t i = 0; i < r.n; ++i) {
        const double e = (a[i] - b[i]) - r.mean_diff;
        ss += e * e;
    }
    r.sd_diff = std::sqrt(ss / (n - 1.0));

    const double excess = std::abs(r.mean_diff) - config.threshold;
    if (r.sd_diff == 0.0) {
        r.separate = excess > 0.0;
        r.t = excess > 0.0 ? std::numeric_limits<double>::infinity()
                           : (excess < 0.0 ? -std::numeric_limits<double>::infinity() : 0.0);
        r.p = r.separate ? 0.0 : 1.0;
        return r;
    }
    r.t = excess / (r.sd_diff / std::sqrt(n));
    const boost::math::students_t dist(n - 1.0);
    r.p = boost::math::cdf(boost::math::complement(dist, r.t));
    r.separate = r.p < config.alpha;
    return r;
}

bool minimal_effect_separate(std::span<const double> a, std::span<const double> b, const MinimalEffectConfig& config) {
    return minimal_effect_test(a, b, config).separate;
}

MergePartition merge_scan(std::span<const std::vector<double>> units, const MinimalEffectConfig& config, Axis axis) {
    MergePartition out;
    out.axis = axis;
    if (units.empty()) return out;

    out.groups.push_back({1});
    std::vector<double> current = units[0];
    for (std::size_t i = 1; i < units.size(); ++i) {
        const int unit = static_cast<int>(i) + 1;
        if (minimal_effect_separate(current, units[i], config)) {
            out.groups.push_back({unit});
            current = units[i];
            continue;
        }
        auto& group = out.groups.back();
        group.push_back(unit);
        std::fill(current.begin(), current.end(), 0.0);
        for (int member : group) {
            const auto& v = units[static_cast<std::size_t>(member - 1)];
            for (std::size_t k = 0; k < current.size(); ++k) current[k] += v[k];
        }
        const double count = static_cast<double>(group.size());
        for (double& v : current) v /= count;
    }
    return out;
}

AggregatedZoneSystem assemble_aggregated_system(std::vector<std::vector<int>> column_units,
                                                std::vector<std::vector<int>> row_units, MergePartition column_groups,
                                                MergePartition row_groups, std::vector<int> full_width_rows,
                                                bool folded) {
    check_partition(column_groups, column_units.size(), "column");
    check_partition(row_groups, row_units.size(), "row");
    std::sort(full_width_rows.begin(), full_width_rows.end());
    full_width_rows.erase(std::unique(full_width_rows.begin(), full_width_rows.end()), full_width_rows.end());
    for (int g : full_width_rows) {
        if (g < 1 || g > static_cast<int>(row_groups.size())) throw ContractViolation("full-width row out of range");
    }

    const GridZoneSystem grid = build_grid(5.0);
    AggregatedZoneSystem sys;
    sys.folded = folded;

    auto collect = [](const std::vector<std::vector<int>>& units, const std::vector<int>& group) {
        std::vector<int> members;
        for (int u : group) {
            const auto& m = units[static_cast<std::size_t>(u - 1)];
            members.insert(members.end(), m.begin(), m.end());
        }
        std::sort(members.begin(), members.end());
        return members;
    };

    int next_id = 1;
    for (std::size_t g = 0; g < row_groups.groups.size(); ++g) {
        const int row_group = static_cast<int>(g) + 1;
        const auto rows = collect(row_units, row_groups.groups[g]);
        const bool full = std::binary_search(full_width_rows.begin(), full_width_rows.end(), row_group);
        if (full) {
            AggregatedZone z{next_id++, {}, true, row_group, 0};
            for (int r : rows) {
                for (int c = 1; c <= grid.n_columns(); ++c) z.members.push_back(grid.zone_at(c, r).index);
            }
            std::sort(z.members.begin(), z.members.end());
            sys.zones.push_back(std::move(z));
            continue;
        }
        for (std::size_t cg = 0; cg < column_groups.groups.size(); ++cg) {
            const auto cols = collect(column_units, column_groups.groups[cg]);
            AggregatedZone z{next_id++, {}, false, row_group, static_cast<int>(cg) + 1};
            for (int r : rows) {
                for (int c : cols) z.members.push_back(grid.zone_at(c, r).index);
            }
            std::sort(z.members.begin(), z.members.end());
            sys.zones.push_back(std::move(z));
        }
    }

    sys.column_units = std::move(column_units);
    sys.row_units = std::move(row_units);
    sys.column_groups = std::move(column_groups);
    sys.column_groups.axis = Axis::column;
    sys.row_groups = std::move(row_groups);
    sys.row_groups.axis = Axis::row;
    sys.full_width_rows = std::move(full_width_rows);
    return sys;
}

AggregatedZoneSystem build_aggregated_system(std::span<const MatchReturnMatrix> matrices,
                                             const AggregationConfig& config) {
    config.test.validate();
    const auto folded = fold_and_pair(marginal_returns(matrices), config.fold_columns);

    std::vector<std::vector<double>> col_series;
    std::vector<std::vector<int>> col_units;
    for (const auto& u : folded.columns) {
        col_series.push_back(u.values);
        col_units.push_back(u.members);
    }
    std::vector<std::vector<double>> row_series;
    std::vector<std::vector<int>> row_units;
    for (const auto& u : folded.rows) {
        row_series.push_back(u.values);
        row_units.push_back(u.members);
    }
    auto column_groups = merge_scan(col_series, config.test, Axis::column);
    auto row_groups = merge_scan(row_series, config.test, Axis::row);

    long long all_visits = 0;
    for (const auto& v : folded.row_visits) all_visits = std::accumulate(v.begin(), v.end(), all_visits);

    std::vector<int> full_width;
    const auto& rule = config.full_width;
    for (std::size_t g = 0; g < row_groups.groups.size(); ++g) {
        const int idx = static_cast<int>(g) + 1;
        long long visits = 0;
        std::size_t observed = 0;
        for (std::size_t i = 0; i < folded.keys.size(); ++i) {
            long long here = 0;
            for (int u : row_groups.groups[g]) here += folded.row_visits[static_cast<std::size_t>(u - 1)][i];
            visits += here;
            if (here > 0) ++observed;
        }
        const double share = all_visits > 0 ? static_cast<double>(visits) / static_cast<double>(all_visits) : 0.0;
        // Fewer than two team-matches ever reach the row: a within-row column
        // test would have no data.
        bool full = share < rule.min_play_share || observed < 2;
        if (std::find(rule.force.begin(), rule.force.end(), idx) != rule.force.end()) full = true;
        if (std::find(rule.never.begin(), rule.never.end(), idx) != rule.never.end()) full = false;
        if (full) full_width.push_back(idx);
    }

    return assemble_aggregated_system(std::move(col_units), std::move(row_units), std::move(column_groups),
                                      std::move(row_groups), std::move(full_width), config.fold_columns);
}

ZoneSystem AggregatedZoneSystem::zone_system() const {
    std::vector<std::vector<int>> members;
    members.reserve(zones.size());
    for (const auto& z : zones) members.push_back(z.members);
    auto label = partition_label(members);
    return ZoneSystem::from_partition(build_grid(5.0), std::move(members), std::move(label));
}

EPVModel aggregated_values(const EPVModel& epv_5m, const ZoneSystem& system) {
    if (!epv_5m.system.is_grid() || !(epv_5m.system.base() == system.base())) {
        throw ContractViolation("aggregated_values() needs a model on the base grid of the target system");
    }
    const auto n = static_cast<std::size_t>(system.zone_count());
    EPVModel out{system, epv_5m.gamma, std::vector<std::optional<double>>(n), std::vector<long long>(n, 0)};
    for (int z = 1; z <= system.zone_count(); ++z) {
        const auto& members = system.members(ZoneId{z});
        if (members.empty()) throw ContractViolation("aggregated zone without members");
        double weighted = 0.0;
        long long visits = 0;
        for (int cell : members) {
            const auto ci = static_cast<std::size_t>(cell - 1);
            const long long v = epv_5m.visits[ci];
            if (v == 0) continue;
            weighted += static_cast<double>(v) * *epv_5m.values[ci];
            visits += v;
        }
        const auto zi = static_cast<std::size_t>(z - 1);
        out.visits[zi] = visits;
        if (visits > 0) out.values[zi] = weighted / static_cast<double>(visits);
    }
    return out;
}

std::string partition_label(std::span<const std::vector<int>> members) {
    std::uint32_t h = 2166136261u;
    auto mix = [&h](std::uint32_t v) {
        for (int i = 0; i < 4; ++i) {
            h ^= (v >> (8 * i)) & 0xffu;
            h *= 16777619u;
        }
    };
    for (const auto& zone : members) {
        mix(0xffffffffu);
        for (int cell : zone) mix(static_cast<std::uint32_t>(cell));
    }
    char buf[16];
    std::snprintf(buf, sizeof buf, "%08x", h);
    return "agg" + std::to_string(members.size()) + "-" + buf;
}

}  // namespace epv
