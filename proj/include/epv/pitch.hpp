#pragma once

#include <compare>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace epv {

/// Pitch frame used throughout the library.
///
/// x runs across the width, [0, 68]. y runs along the length, [-10, 110], with
/// y = 0 the attacking team's own try line and y = 100 the opposition try line.
/// Zone systems cover the playable strip y in [-10, 100); the opposition in-goal
/// is not modelled.
struct Pitch {
    double width_m = 68.0;
    double length_m = 120.0;
    double own_in_goal_depth_m = 10.0;
    double opp_in_goal_depth_m = 10.0;

    double y_min() const { return -own_in_goal_depth_m; }
    double y_max() const { return length_m - own_in_goal_depth_m; }
    double opp_try_line() const { return length_m - own_in_goal_depth_m - opp_in_goal_depth_m; }
    bool is_standard() const;
};

struct Rect {
    double x0 = 0, x1 = 0, y0 = 0, y1 = 0;

    double area() const { return (x1 - x0) * (y1 - y0); }
    friend bool operator==(const Rect&, const Rect&) = default;
};

/// 1-based zone index. Grid zones are numbered row-major from the own dead-ball
/// line upwards, left to right within a row.
struct ZoneId {
    int index = 0;

    friend auto operator<=>(const ZoneId&, const ZoneId&) = default;
};

class GridZoneSystem {
public:
    GridZoneSystem(double cell_length_m, std::vector<double> column_edges, std::vector<double> row_edges);

    double cell_length_m() const { return cell_length_m_; }
    int n_columns() const { return static_cast<int>(column_edges_.size()) - 1; }
    int n_rows() const { return static_cast<int>(row_edges_.size()) - 1; }
    int zone_count() const { return n_columns() * n_rows(); }
    std::span<const double> column_edges() const { return column_edges_; }
    std::span<const double> row_edges() const { return row_edges_; }

    // column and row are 1-based
    ZoneId zone_at(int column, int row) const;
    std::pair<int, int> cell_of(ZoneId zone) const;

    int column_of(double x) const;
    int row_of(double y) const;
    ZoneId zone_of(double x, double y) const;
    Rect bounds(ZoneId zone) const;

    friend bool operator==(const GridZoneSystem&, const GridZoneSystem&) = default;

private:
    double cell_length_m_;
    std::vector<double> column_edges_;
    std::vector<double> row_edges_;
};

/// Builds the 5m (308 zone) or 10m (77 zone) grid. The outermost columns are
/// 1m narrower than the central ones so that integer metre edges are kept.
GridZoneSystem build_grid(double cell_length_m, const Pitch& pitch = Pitch{});

/// Point lookup. Cells are half-open [lo, hi); the right touchline x = 68 falls
/// in the last column. Throws OutOfModelArea for y >= 100 and
/// InvalidCoordinate for points off the pitch.
ZoneId zone_of(double x, double y, const GridZoneSystem& system);

struct MirrorClass {
    int class_index = 0;
    std::pair<int, int> member_columns;

    friend bool operator==(const MirrorClass&, const MirrorClass&) = default;
};

/// Pairs column c with column n + 1 - c; classes count from the touchlines in.
MirrorClass mirror_class(int column, int n_columns);

/// A partition of the playable area into zones, expressed over an underlying
/// grid. Fixed grids map each cell to itself; aggregated systems map each 5m
/// cell to the aggregated zone containing it.
class ZoneSystem {
public:
    static ZoneSystem from_grid(GridZoneSystem grid);
    /// members[z] lists the 1-based grid cells of zone z + 1. Every cell must
    /// appear exactly once.
    static ZoneSystem from_partition(GridZoneSystem base, std::vector<std::vector<int>> members,
                                     std::string label);

    const std::string& label() const { return label_; }
    const GridZoneSystem& base() const { return base_; }
    bool is_grid() const { return is_grid_; }
    int zone_count() const { return static_cast<int>(members_.size()); }

    ZoneId zone_of(double x, double y) const;
    ZoneId zone_of_cell(int cell) const { return ZoneId{cell_to_zone_[static_cast<std::size_t>(cell - 1)]}; }
    const std::vector<int>& members(ZoneId zone) const;
    /// Zone outline as a small set of disjoint rectangles.
    const std::vector<Rect>& bounds(ZoneId zone) const;
    double area(ZoneId zone) const;

    /// Same base grid and same cell-to-zone mapping.
    bool same_partition(const ZoneSystem& other) const;

private:
    ZoneSystem(GridZoneSystem base, std::vector<std::vector<int>> members, std::string label, bool is_grid);

    GridZoneSystem base_;
    std::string label_;
    bool is_grid_ = false;
    std::vector<std::vector<int>> members_;
    std::vector<int> cell_to_zone_;
    std::vector<std::vector<Rect>> bounds_;
};

/// Merges a set of grid cells into disjoint rectangles: contiguous runs along
/// each row first, then identical runs on consecutive rows.
std::vector<Rect> outline(const GridZoneSystem& grid, std::span<const int> cells);

}  // namespace epv
