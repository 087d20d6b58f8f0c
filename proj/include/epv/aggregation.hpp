#pragma once

#include <span>
#include <string>
#include <vector>

#include "epv/pitch.hpp"
#include "epv/valuation.hpp"

namespace epv {

enum class Axis { column, row };

struct ObservationKey {
    std::string match_id;
    std::string team_id;

    friend bool operator==(const ObservationKey&, const ObservationKey&) = default;
};

/// Summed match return of one grid column (or row) for every team-match.
/// `values` is aligned with the owning MarginalReturns::keys.
struct MarginalReturnSeries {
    Axis axis = Axis::column;
    int group_index = 0;  // 1-based column or row
    std::vector<double> values;
};

struct MarginalReturns {
    std::vector<ObservationKey> keys;
    std::vector<MarginalReturnSeries> columns;  // 14 on the 5m grid
    std::vector<MarginalReturnSeries> rows;     // 22 on the 5m grid
    std::vector<std::vector<long long>> row_visits;  // [row][observation]
};

/// Column and row marginals of 5m-grid match return matrices.
MarginalReturns marginal_returns(std::span<const MatchReturnMatrix> matrices);

/// A set of grid columns (or rows) treated as one unit in the merge scan.
struct AxisUnit {
    std::vector<int> members;  // 1-based grid columns or rows
    std::vector<double> values;
};

struct FoldedReturns {
    std::vector<ObservationKey> keys;
    std::vector<AxisUnit> columns;  // 7 mirror classes (outermost first), or 14 columns unfolded
    std::vector<AxisUnit> rows;     // 11 pairs of adjacent 5m rows
    std::vector<std::vector<long long>> row_visits;  // per row unit
};

/// Sums mirrored column pairs (c, 15 - c) and adjacent row pairs. With
/// `fold_columns` false the 14 columns are kept in left-to-right order.
FoldedReturns fold_and_pair(const MarginalReturns& marginals, bool fold_columns = true);

struct MinimalEffectConfig {
    double threshold = 1.0;  // smallest effect of interest, match-return units
    double alpha = 0.05;

    void validate() const;
};

struct MinimalEffectResult {
    std::size_t n = 0;
    double mean_diff = 0.0;
    double sd_diff = 0.0;
    double t = 0.0;
    double p = 1.0;
    bool separate = false;
};

/// One-sided minimal-effects test on paired differences d = a - b:
/// H0 |mean d| <= threshold against H1 |mean d| > threshold.
MinimalEffectResult minimal_effect_test(std::span<const double> a, std::span<const double> b,
                                        const MinimalEffectConfig& config);

/// True when the two series must stay separate.
bool minimal_effect_separate(std::span<const double> a, std::span<const double> b, const MinimalEffectConfig& config);

struct MergePartition {
    Axis axis = Axis::column;
    std::vector<std::vector<int>> groups;  // 1-based unit indexes, contiguous and ascending

    std::size_t size() const { return groups.size(); }
};

/// Single pass along the axis: the current group absorbs the next unit unless
/// the minimal-effects test separates them. A merged group is represented by
/// the per-observation mean of its members.
MergePartition merge_scan(std::span<const std::vector<double>> units, const MinimalEffectConfig& config,
                          Axis axis = Axis::column);

/// When a row group is drawn as a single full-width zone instead of being
/// split by the column groups.
struct FullWidthRule {
    double min_play_share = 0.05;     // rows with a smaller share of all plays
    std::vector<int> force;           // 1-based row groups always full width
    std::vector<int> never;           // 1-based row groups never full width
};

struct AggregationConfig {
    MinimalEffectConfig test;
    bool fold_columns = true;
    FullWidthRule full_width;
};

struct AggregatedZone {
    int id = 0;
    std::vector<int> members;  // 5m grid cells
    bool full_width = false;
    int row_group = 0;         // 1-based
    int column_group = 0;      // 1-based, 0 for full-width zones
};

struct AggregatedZoneSystem {
    bool folded = true;
    std::vector<std::vector<int>> column_units;  // grid columns per unit
    std::vector<std::vector<int>> row_units;     // grid rows per unit
    MergePartition column_groups;
    MergePartition row_groups;
    std::vector<int> full_width_rows;  // 1-based row groups
    std::vector<AggregatedZone> zones;

    int zone_count() const { return static_cast<int>(zones.size()); }
    ZoneSystem zone_system() const;
};

/// Marginals, folding, merge scans on both axes, then the cross product of
/// column and row groups. Zones are numbered from the own try line upwards and
/// from the outermost column group inwards.
AggregatedZoneSystem build_aggregated_system(std::span<const MatchReturnMatrix> matrices,
                                             const AggregationConfig& config = {});

/// Assembles the zones for given partitions, without re-running the scans.
AggregatedZoneSystem assemble_aggregated_system(std::vector<std::vector<int>> column_units,
                                                std::vector<std::vector<int>> row_units, MergePartition column_groups,
                                                MergePartition row_groups, std::vector<int> full_width_rows,
                                                bool folded);

/// Visit-weighted mean of the member 5m values.
EPVModel aggregated_values(const EPVModel& epv_5m, const ZoneSystem& system);

/// Stable label for a partition of the 5m grid, e.g. "agg19-1a2b3c4d".
std::string partition_label(std::span<const std::vector<int>> members);

}  // namespace epv
