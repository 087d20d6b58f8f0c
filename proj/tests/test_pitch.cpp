#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>
#include <random>

#include "epv/errors.hpp"
#include "epv/pitch.hpp"

using namespace epv;

namespace {

std::vector<double> widths(std::span<const double> edges) {
    std::vector<double> w;
    for (std::size_t i = 1; i < edges.size(); ++i) w.push_back(edges[i] - edges[i - 1]);
    return w;
}

// Linear scan over the edges, independent of the grid's own lookup.
int scan(std::span<const double> edges, double v) {
    const int n = static_cast<int>(edges.size()) - 1;
    for (int i = 0; i < n; ++i) {
        if (v >= edges[static_cast<std::size_t>(i)] && v < edges[static_cast<std::size_t>(i) + 1]) return i + 1;
    }
    return n;  // closed last cell
}

}  // namespace

TEST_CASE("5m grid has 308 zones with 4m edge columns") {
    const auto g = build_grid(5);
    CHECK(g.zone_count() == 308);
    CHECK(g.n_columns() == 14);
    CHECK(g.n_rows() == 22);
    const auto w = widths(g.column_edges());
    CHECK(w.front() == 4.0);
    CHECK(w.back() == 4.0);
    for (std::size_t i = 1; i + 1 < w.size(); ++i) CHECK(w[i] == 5.0);
    CHECK(std::accumulate(w.begin(), w.end(), 0.0) == 68.0);
    for (double h : widths(g.row_edges())) CHECK(h == 5.0);
    CHECK(g.row_edges().front() == -10.0);
    CHECK(g.row_edges().back() == 100.0);
}

TEST_CASE("10m grid has 77 zones with 9m edge columns") {
    const auto g = build_grid(10);
    CHECK(g.zone_count() == 77);
    const std::vector<double> expected{9, 10, 10, 10, 10, 10, 9};
    CHECK(widths(g.column_edges()) == expected);
    CHECK(g.n_rows() == 11);
}

TEST_CASE("unsupported cell lengths are configuration errors") {
    CHECK_THROWS_AS(build_grid(7), ConfigError);
    Pitch wide;
    wide.width_m = 70;
    CHECK_THROWS_AS(build_grid(5, wide), ConfigError);
}

TEST_CASE("zone_of examples") {
    const auto g10 = build_grid(10);
    const auto z = zone_of(34, 50, g10);
    CHECK(g10.cell_of(z) == std::pair{4, 7});
    CHECK(zone_of(0, -10, build_grid(5)).index == 1);
    CHECK_THROWS_AS(zone_of(34, 105, build_grid(5)), OutOfModelArea);
    CHECK_THROWS_AS(zone_of(34, 105, g10), OutOfModelArea);
    CHECK_THROWS_AS(zone_of(34, 100, g10), OutOfModelArea);
    CHECK_THROWS_AS(zone_of(-1, 50, g10), InvalidCoordinate);
    CHECK_THROWS_AS(zone_of(69, 50, g10), InvalidCoordinate);
    CHECK_THROWS_AS(zone_of(30, -11, g10), InvalidCoordinate);
}

TEST_CASE("boundaries belong to the upper cell, the right touchline to the last column") {
    const auto g = build_grid(5);
    CHECK(g.column_of(4.0) == 2);
    CHECK(g.column_of(3.999) == 1);
    CHECK(g.column_of(68.0) == 14);
    CHECK(g.row_of(0.0) == 3);
    CHECK(g.row_of(-0.001) == 2);
    CHECK(zone_of(68, 99.9, g).index == 308);
}

TEST_CASE("zone indexes are row-major from the own dead-ball line") {
    const auto g = build_grid(5);
    CHECK(g.zone_at(1, 1).index == 1);
    CHECK(g.zone_at(14, 1).index == 14);
    CHECK(g.zone_at(1, 2).index == 15);
    for (int z = 1; z <= g.zone_count(); ++z) {
        const auto [c, r] = g.cell_of(ZoneId{z});
        CHECK(g.zone_at(c, r).index == z);
    }
}

TEST_CASE("random points: tiling and agreement with a linear edge scan") {
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> ux(0.0, 68.0), uy(-10.0, 100.0);
    for (double cell : {5.0, 10.0}) {
        const auto g = build_grid(cell);
        for (int i = 0; i < 10000; ++i) {
            const double x = ux(rng), y = uy(rng);
            const auto z = zone_of(x, y, g);
            const ZoneId expected = g.zone_at(scan(g.column_edges(), x), scan(g.row_edges(), y));
            REQUIRE(z == expected);
            int containing = 0;
            for (int k = 1; k <= g.zone_count(); ++k) {
                const auto b = g.bounds(ZoneId{k});
                const bool in_x = x >= b.x0 && (x < b.x1 || (b.x1 == 68.0 && x <= b.x1));
                const bool in_y = y >= b.y0 && y < b.y1;
                containing += in_x && in_y ? 1 : 0;
            }
            REQUIRE(containing == 1);
        }
    }
}

TEST_CASE("zone areas add up to the playable area") {
    for (double cell : {5.0, 10.0}) {
        const auto g = build_grid(cell);
        double area = 0;
        for (int z = 1; z <= g.zone_count(); ++z) area += g.bounds(ZoneId{z}).area();
        CHECK(area == doctest::Approx(68.0 * 110.0).epsilon(1e-12));
        const auto sys = ZoneSystem::from_grid(g);
        double sys_area = 0;
        for (int z = 1; z <= sys.zone_count(); ++z) sys_area += sys.area(ZoneId{z});
        CHECK(sys_area == doctest::Approx(68.0 * 110.0).epsilon(1e-12));
    }
}

TEST_CASE("mirror classes") {
    CHECK(mirror_class(1, 14) == MirrorClass{1, {1, 14}});
    CHECK(mirror_class(7, 14) == MirrorClass{7, {7, 8}});
    CHECK(mirror_class(13, 14) == MirrorClass{2, {2, 13}});
    for (int n : {7, 14}) {
        for (int c = 1; c <= n; ++c) CHECK(mirror_class(c, n) == mirror_class(n + 1 - c, n));
    }
    CHECK(mirror_class(4, 7) == MirrorClass{4, {4, 4}});
    CHECK_THROWS_AS(mirror_class(0, 14), InvalidCoordinate);
    CHECK_THROWS_AS(mirror_class(15, 14), InvalidCoordinate);

    // class 1 covers 8m, the others 10m
    const auto g = build_grid(5);
    const auto w = widths(g.column_edges());
    for (int cls = 1; cls <= 7; ++cls) {
        const auto m = mirror_class(cls, 14).member_columns;
        const double width = w[static_cast<std::size_t>(m.first - 1)] + w[static_cast<std::size_t>(m.second - 1)];
        CHECK(width == (cls == 1 ? 8.0 : 10.0));
    }
}

TEST_CASE("partitions: lookup through member cells, outlines and validation") {
    const auto g = build_grid(5);
    std::vector<std::vector<int>> halves(2);
    for (int z = 1; z <= g.zone_count(); ++z) halves[g.cell_of(ZoneId{z}).second <= 11 ? 0 : 1].push_back(z);
    const auto sys = ZoneSystem::from_partition(g, halves, "halves");
    CHECK(sys.zone_count() == 2);
    CHECK(sys.zone_of(10, 10).index == 1);
    CHECK(sys.zone_of(10, 60).index == 2);
    REQUIRE(sys.bounds(ZoneId{1}).size() == 1);
    CHECK(sys.bounds(ZoneId{1}).front() == Rect{0, 68, -10, 45});
    CHECK(sys.area(ZoneId{2}) == doctest::Approx(68.0 * 55.0));

    auto dup = halves;
    dup[1].push_back(1);
    CHECK_THROWS_AS(ZoneSystem::from_partition(g, dup, "bad"), ContractViolation);
    auto gap = halves;
    gap[1].pop_back();
    CHECK_THROWS_AS(ZoneSystem::from_partition(g, gap, "bad"), ContractViolation);

    const std::vector<int> ring{1, 14};  // two touchline cells
    CHECK(outline(g, ring).size() == 2);
}

TEST_CASE("the 10m grid zones are unions of 5m cells") {
    const auto g5 = build_grid(5);
    const auto g10 = build_grid(10);
    for (int z = 1; z <= g5.zone_count(); ++z) {
        const auto b = g5.bounds(ZoneId{z});
        const auto outer = g10.bounds(zone_of(b.x0, b.y0, g10));
        CHECK(b.x0 >= outer.x0);
        CHECK(b.x1 <= outer.x1);
        CHECK(b.y0 >= outer.y0);
        CHECK(b.y1 <= outer.y1);
    }
}
