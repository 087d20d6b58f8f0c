#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "epv/errors.hpp"
#include "epv/synth.hpp"
#include "epv/valuation.hpp"
#include "oracles.hpp"

using namespace epv;
using oracle::ends;
using oracle::play;

namespace {

const ZoneSystem& grid5() {
    static const ZoneSystem g = ZoneSystem::from_grid(build_grid(5));
    return g;
}

Possession possession(std::vector<Play> plays, TerminalMarker end, const std::string& team = "A",
                      const std::string& match = "M1") {
    Possession p;
    p.match_id = match;
    p.team_id = team;
    for (auto& q : plays) {
        q.match_id = match;
        q.team_id = team;
    }
    plays.back().terminal = end;
    p.plays = std::move(plays);
    p.ending = end;
    p.reward = assign_reward(end);
    return p;
}

std::vector<Possession> season(std::uint64_t seed, int matches = 4) {
    auto cfg = synth::regime_config(seed);
    cfg.n_matches_per_team = matches;
    const auto s = synth::generate_season(cfg);
    return segment_matches(normalize(s.events, Orientation::attacking_frame));
}

}  // namespace

TEST_CASE("play_return") {
    const auto p = possession({play("A", 1, 1), play("A", 2, 2), play("A", 3, 3)}, ends(TerminalKind::try_scored, true));
    CHECK(play_return(p, 1, 1.0) == 6.0);
    CHECK(play_return(p, 1, 0.5) == 1.5);
    CHECK(play_return(p, 3, 0.5) == 6.0);
    const auto zero = possession({play("A", 1, 1), play("A", 2, 2), play("A", 3, 3)}, ends(TerminalKind::error));
    for (int t = 1; t <= 3; ++t) CHECK(play_return(zero, t, 0.5) == 0.0);
    CHECK_THROWS_AS(play_return(p, 0, 1.0), ContractViolation);
    CHECK_THROWS_AS(play_return(p, 4, 1.0), ContractViolation);
}

TEST_CASE("gamma must lie in (0, 1]") {
    CHECK_THROWS_AS(ValuationConfig{0.0}.validate(), ConfigError);
    CHECK_THROWS_AS(ValuationConfig{1.5}.validate(), ConfigError);
    CHECK_NOTHROW(ValuationConfig{1.0}.validate());
}

TEST_CASE("match returns count every visit") {
    // zone A = (1,1) -> cell 15 on the 5m grid, zone B = (10,1)
    const auto p = possession({play("A", 1, 1), play("A", 10, 1), play("A", 1, 1)}, ends(TerminalKind::try_scored, false));
    const std::vector<Possession> ps{p};
    const auto m = match_returns(ps, grid5(), {});
    const int a = grid5().zone_of(1, 1).index - 1;
    const int b = grid5().zone_of(10, 1).index - 1;
    CHECK(m.returns[static_cast<std::size_t>(a)] == 8.0);
    CHECK(m.returns[static_cast<std::size_t>(b)] == 4.0);
    CHECK(m.visits[static_cast<std::size_t>(a)] == 2);
    CHECK(m.visits[static_cast<std::size_t>(b)] == 1);
    CHECK(m.total() == 12.0);

    const auto empty = match_returns({}, grid5(), {});
    CHECK(empty.total() == 0.0);
    CHECK(empty.zone_count() == 308);
}

TEST_CASE("two possessions through the same zone") {
    const std::vector<Possession> ps{possession({play("A", 1, 1)}, ends(TerminalKind::try_scored, true)),
                                     possession({play("A", 1, 1)}, ends(TerminalKind::error))};
    const auto m = match_returns(ps, grid5(), {});
    const auto a = static_cast<std::size_t>(grid5().zone_of(1, 1).index - 1);
    CHECK(m.returns[a] == 6.0);
    CHECK(m.visits[a] == 2);
    const auto model = estimate_epv(ps, grid5(), {});
    CHECK(*model.values[a] == 3.0);
    CHECK(model.visits[a] == 2);
    CHECK_FALSE(model.values[a + 1].has_value());
}

TEST_CASE("a single visit at the final play keeps the full reward for any gamma") {
    const std::vector<Possession> ps{
        possession({play("A", 40, 40), play("A", 30, 90)}, ends(TerminalKind::try_scored, true))};
    for (double g : {0.3, 0.9, 1.0}) {
        const auto model = estimate_epv(ps, grid5(), {g});
        CHECK(*model.values[static_cast<std::size_t>(grid5().zone_of(30, 90).index - 1)] == 6.0);
    }
}

TEST_CASE("mixed teams or matches are rejected") {
    const std::vector<Possession> ps{possession({play("A", 1, 1)}, ends(TerminalKind::error), "A"),
                                     possession({play("B", 1, 1)}, ends(TerminalKind::error), "B")};
    CHECK_THROWS_AS(match_returns(ps, grid5(), {}), ContractViolation);
    CHECK_THROWS_AS(estimate_epv({}, grid5(), {}), ContractViolation);
}

TEST_CASE("estimator matches the naive double loop") {
    const auto grid10 = ZoneSystem::from_grid(build_grid(10));
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const auto ps = season(seed);
        for (const ZoneSystem* sys : {&grid5(), &grid10}) {
            for (double g : {0.5, 0.9, 1.0}) {
                const auto model = estimate_epv(ps, *sys, {g});
                const auto naive = oracle::naive_epv(ps, *sys, g);
                for (std::size_t z = 0; z < naive.size(); ++z) {
                    REQUIRE(model.visits[z] == naive[z].visits);
                    if (naive[z].visits == 0) {
                        CHECK_FALSE(model.values[z].has_value());
                        continue;
                    }
                    const double expected = naive[z].sum / static_cast<double>(naive[z].visits);
                    CHECK(oracle::relative_error(*model.values[z], expected) <= 1e-12);
                    CHECK(*model.values[z] >= 0.0);
                    CHECK(*model.values[z] <= 6.0);
                }
            }
        }
    }
}

TEST_CASE("pooling per-match matrices reproduces the season estimate") {
    const auto ps = season(11);
    for (double g : {0.7, 1.0}) {
        const auto direct = estimate_epv(ps, grid5(), {g});
        const auto matrices = all_match_returns(ps, grid5(), {g});
        const auto pooled = epv_from_matrices(matrices, grid5(), g);
        // visit-weighted average of per-match EPV
        for (std::size_t z = 0; z < 308; ++z) {
            double num = 0;
            long long den = 0;
            for (const auto& m : matrices) {
                if (m.visits[z] == 0) continue;
                const double match_epv = m.returns[z] / static_cast<double>(m.visits[z]);
                num += match_epv * static_cast<double>(m.visits[z]);
                den += m.visits[z];
            }
            REQUIRE(pooled.visits[z] == direct.visits[z]);
            if (den == 0) continue;
            CHECK(oracle::relative_error(*direct.values[z], num / static_cast<double>(den)) <= 1e-12);
            CHECK(oracle::relative_error(*pooled.values[z], *direct.values[z]) <= 1e-12);
        }
    }
}

TEST_CASE("gamma 1 equals the visit-weighted mean terminal reward") {
    const auto ps = season(5);
    std::vector<double> tally(308, 0.0);
    std::vector<double> count(308, 0.0);
    for (const auto& p : ps) {
        for (const auto& q : p.plays) {
            const auto z = static_cast<std::size_t>(grid5().zone_of(q.x, q.y).index - 1);
            tally[z] += oracle::points(p.ending);
            count[z] += 1;
        }
    }
    const auto model = estimate_epv(ps, grid5(), {1.0});
    for (std::size_t z = 0; z < 308; ++z) {
        if (count[z] == 0) continue;
        CHECK(*model.values[z] == doctest::Approx(tally[z] / count[z]).epsilon(1e-12));
    }
}

TEST_CASE("per play index estimates split the visits") {
    const auto ps = season(6, 2);
    const auto by_t = estimate_epv_by_play_index(ps, grid5(), {});
    const auto pooled = estimate_epv(ps, grid5(), {});
    for (std::size_t z = 0; z < 308; ++z) {
        long long visits = 0;
        double sum = 0;
        for (const auto& m : by_t) {
            visits += m.visits[z];
            if (m.values[z]) sum += *m.values[z] * static_cast<double>(m.visits[z]);
        }
        CHECK(visits == pooled.visits[z]);
        if (visits > 0) CHECK(sum / static_cast<double>(visits) == doctest::Approx(*pooled.values[z]).epsilon(1e-12));
    }
}

TEST_CASE("accumulator batching does not change the bits") {
    const auto ps = season(8, 3);
    EpvAccumulator acc(grid5(), {0.9});
    for (const auto& p : ps) acc.add(p);
    const auto a = acc.finish();
    const auto b = estimate_epv(ps, grid5(), {0.9});
    CHECK(a.values == b.values);
    CHECK(a.visits == b.visits);
}

TEST_CASE("plays in the opposition in-goal are rejected") {
    const std::vector<Possession> ps{possession({play("A", 34, 105)}, ends(TerminalKind::error))};
    CHECK_THROWS_AS(estimate_epv(ps, grid5(), {}), OutOfModelArea);
}
