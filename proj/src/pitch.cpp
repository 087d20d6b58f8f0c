#include "epv/pitch.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

#include "epv/errors.hpp"

namespace epv {

bool Pitch::is_standard() const {
    return width_m == 68.0 && length_m == 120.0 && own_in_goal_depth_m == 10.0 && opp_in_goal_depth_m == 10.0;
}

GridZoneSystem::GridZoneSystem(double cell_length_m, std::vector<double> column_edges, std::vector<double> row_edges)
    : cell_length_m_(cell_length_m), column_edges_(std::move(column_edges)), row_edges_(std::move(row_edges)) {
    if (column_edges_.size() < 2 || row_edges_.size() < 2) {
        throw ConfigError("grid needs at least one column and one row");
    }
    if (!std::is_sorted(column_edges_.begin(), column_edges_.end()) ||
        !std::is_sorted(row_edges_.begin(), row_edges_.end())) {
        throw ConfigError("grid edges must be ascending");
    }
}

ZoneId GridZoneSystem::zone_at(int column, int row) const {
    if (column < 1 || column > n_columns() || row < 1 || row > n_rows()) {
        throw InvalidCoordinate("grid cell (" + std::to_string(column) + ", " + std::to_string(row) +
                                ") outside the grid");
    }
    return ZoneId{(row - 1) * n_columns() + column};
}

std::pair<int, int> GridZoneSystem::cell_of(ZoneId zone) const {
    if (zone.index < 1 || zone.index > zone_count()) {
        throw ContractViolation("zone " + std::to_string(zone.index) + " not in grid");
    }
    const int i = zone.index - 1;
    return {i % n_columns() + 1, i / n_columns() + 1};
}

int GridZoneSystem::column_of(double x) const {
    if (!(x >= column_edges_.front() && x <= column_edges_.back())) {
        throw InvalidCoordinate("x = " + std::to_string(x) + " off the pitch");
    }
    auto it = std::upper_bound(column_edges_.begin(), column_edges_.end(), x);
    const int col = static_cast<int>(it - column_edges_.begin());
    return std::min(col, n_columns());
}

int GridZoneSystem::row_of(double y) const {
    // row_edges_.back() is the opposition try line; the in-goal behind it is 10m deep
    if (!(y >= row_edges_.front() && y <= row_edges_.back() + 10.0)) {
        throw InvalidCoordinate("y = " + std::to_string(y) + " off the pitch");
    }
    if (y >= row_edges_.back()) {
        throw OutOfModelArea("y = " + std::to_string(y) + " lies in the opposition in-goal");
    }
    auto it = std::upper_bound(row_edges_.begin(), row_edges_.end(), y);
    return static_cast<int>(it - row_edges_.begin());
}

ZoneId GridZoneSystem::zone_of(double x, double y) const {
    const int col = column_of(x);
    const int row = row_of(y);
    return zone_at(col, row);
}

Rect GridZoneSystem::bounds(ZoneId zone) const {
    auto [col, row] = cell_of(zone);
    return Rect{column_edges_[static_cast<std::size_t>(col - 1)], column_edges_[static_cast<std::size_t>(col)],
                row_edges_[static_cast<std::size_t>(row - 1)], row_edges_[static_cast<std::size_t>(row)]};
}

GridZoneSystem build_grid(double cell_length_m, const Pitch& pitch) {
    if (!pitch.is_standard()) {
        throw ConfigError("only the standardised 68m x 120m pitch is supported");
    }
    if (cell_length_m != 5.0 && cell_length_m != 10.0) {
        throw ConfigError("unsupported cell length " + std::to_string(cell_length_m) + "m (expected 5 or 10)");
    }
    // Full-size columns in the middle, the two touchline columns 1m narrower.
    const double edge_width = cell_length_m - 1.0;
    const int inner = static_cast<int>(std::lround((pitch.width_m - 2.0 * edge_width) / cell_length_m));
    std::vector<double> columns{0.0, edge_width};
    for (int i = 0; i < inner; ++i) columns.push_back(columns.back() + cell_length_m);
    columns.push_back(pitch.width_m);

    std::vector<double> rows;
    const int n_rows = static_cast<int>(std::lround((pitch.opp_try_line() - pitch.y_min()) / cell_length_m));
    for (int i = 0; i <= n_rows; ++i) rows.push_back(pitch.y_min() + i * cell_length_m);
    return GridZoneSystem(cell_length_m, std::move(columns), std::move(rows));
}

ZoneId zone_of(double x, double y, const GridZoneSystem& system) { return system.zone_of(x, y); }

MirrorClass mirror_class(int column, int n_columns) {
    if (n_columns < 1 || column < 1 || column > n_columns) {
        throw InvalidCoordinate("column " + std::to_string(column) + " outside 1.." + std::to_string(n_columns));
    }
    const int partner = n_columns + 1 - column;
    return MirrorClass{std::min(column, partner), {std::min(column, partner), std::max(column, partner)}};
}

std::vector<Rect> outline(const GridZoneSystem& grid, std::span<const int> cells) {
    // row -> sorted columns
    std::map<int, std::vector<int>> by_row;
    for (int cell : cells) {
        auto [col, row] = grid.cell_of(ZoneId{cell});
        by_row[row].push_back(col);
    }
    const auto cols = grid.column_edges();
    const auto rows = grid.row_edges();

    struct Open {
        int c0, c1, r0, r1;
    };
    std::vector<Open> done;
    std::vector<Open> open;
    for (auto& [row, columns] : by_row) {
        std::sort(columns.begin(), columns.end());
        std::vector<std::pair<int, int>> runs;
        for (int c : columns) {
            if (!runs.empty() && runs.back().second + 1 == c) {
                runs.back().second = c;
            } else {
                runs.emplace_back(c, c);
            }
        }
        std::vector<Open> next;
        for (auto [c0, c1] : runs) {
            auto it = std::find_if(open.begin(), open.end(), [&](const Open& o) {
                return o.c0 == c0 && o.c1 == c1 && o.r1 + 1 == row;
            });
            if (it != open.end()) {
                Open o = *it;
                o.r1 = row;
                open.erase(it);
                next.push_back(o);
            } else {
                next.push_back(Open{c0, c1, row, row});
            }
        }
        done.insert(done.end(), open.begin(), open.end());
        open = std::move(next);
    }
    done.insert(done.end(), open.begin(), open.end());
    std::sort(done.begin(), done.end(), [](const Open& a, const Open& b) {
        return std::tie(a.r0, a.c0) < std::tie(b.r0, b.c0);
    });

    std::vector<Rect> out;
    out.reserve(done.size());
    for (const auto& o : done) {
        out.push_back(Rect{cols[static_cast<std::size_t>(o.c0 - 1)], cols[static_cast<std::size_t>(o.c1)],
                           rows[static_cast<std::size_t>(o.r0 - 1)], rows[static_cast<std::size_t>(o.r1)]});
    }
    return out;
}

ZoneSystem::ZoneSystem(GridZoneSystem base, std::vector<std::vector<int>> members, std::string label, bool is_grid)
    : base_(std::move(base)), label_(std::move(label)), is_grid_(is_grid), members_(std::move(members)) {
    cell_to_zone_.assign(static_cast<std::size_t>(base_.zone_count()), 0);
    for (std::size_t z = 0; z < members_.size(); ++z) {
        if (members_[z].empty()) {
            throw ContractViolation("zone " + std::to_string(z + 1) + " has no member cells");
        }
        for (int cell : members_[z]) {
            if (cell < 1 || cell > base_.zone_count()) {
                throw ContractViolation("member cell " + std::to_string(cell) + " not in base grid");
            }
            auto& slot = cell_to_zone_[static_cast<std::size_t>(cell - 1)];
            if (slot != 0) {
                throw ContractViolation("grid cell " + std::to_string(cell) + " assigned to two zones");
            }
            slot = static_cast<int>(z) + 1;
        }
    }
    if (std::find(cell_to_zone_.begin(), cell_to_zone_.end(), 0) != cell_to_zone_.end()) {
        throw ContractViolation("zone partition leaves grid cells uncovered");
    }
    bounds_.reserve(members_.size());
    for (const auto& m : members_) bounds_.push_back(outline(base_, m));
}

ZoneSystem ZoneSystem::from_grid(GridZoneSystem grid) {
    std::vector<std::vector<int>> members(static_cast<std::size_t>(grid.zone_count()));
    for (int i = 0; i < grid.zone_count(); ++i) members[static_cast<std::size_t>(i)] = {i + 1};
    std::string label = "grid" + std::to_string(static_cast<int>(grid.cell_length_m()));
    return ZoneSystem(std::move(grid), std::move(members), std::move(label), true);
}

ZoneSystem ZoneSystem::from_partition(GridZoneSystem base, std::vector<std::vector<int>> members, std::string label) {
    return ZoneSystem(std::move(base), std::move(members), std::move(label), false);
}

ZoneId ZoneSystem::zone_of(double x, double y) const { return zone_of_cell(base_.zone_of(x, y).index); }

const std::vector<int>& ZoneSystem::members(ZoneId zone) const {
    if (zone.index < 1 || zone.index > zone_count()) {
        throw ContractViolation("zone " + std::to_string(zone.index) + " not in system " + label_);
    }
    return members_[static_cast<std::size_t>(zone.index - 1)];
}

const std::vector<Rect>& ZoneSystem::bounds(ZoneId zone) const {
    members(zone);
    return bounds_[static_cast<std::size_t>(zone.index - 1)];
}

double ZoneSystem::area(ZoneId zone) const {
    double a = 0.0;
    for (const auto& r : bounds(zone)) a += r.area();
    return a;
}

bool ZoneSystem::same_partition(const ZoneSystem& other) const {
    return base_ == other.base_ && cell_to_zone_ == other.cell_to_zone_;
}

}  // namespace epv
