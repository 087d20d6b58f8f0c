#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "epv/errors.hpp"
#include "epv/possession.hpp"
#include "oracles.hpp"

using namespace epv;
using oracle::ends;
using oracle::play;

TEST_CASE("rewards") {
    CHECK(assign_reward({TerminalKind::try_scored, true}) == 6);
    CHECK(assign_reward({TerminalKind::try_scored, false}) == 4);
    CHECK(assign_reward({TerminalKind::penalty_goal_attempt, true}) == 2);
    CHECK(assign_reward({TerminalKind::penalty_goal_attempt, false}) == 0);
    CHECK(assign_reward({TerminalKind::drop_goal_attempt, true}) == 1);
    CHECK(assign_reward({TerminalKind::drop_goal_attempt, false}) == 0);
    CHECK(assign_reward({TerminalKind::error, false}) == 0);
    CHECK(assign_reward({TerminalKind::handover, false}) == 0);
    CHECK(assign_reward({TerminalKind::field_kick, false}) == 0);
    CHECK_THROWS_AS(assign_reward({}), ContractViolation);
}

TEST_CASE("four plays ending in a field kick") {
    const auto ps = segment(oracle::numbered(
        {play("A", 1, 1), play("A", 2, 2), play("A", 3, 3), play("A", 4, 4, ends(TerminalKind::field_kick))}));
    REQUIRE(ps.size() == 1);
    CHECK(ps[0].length() == 4);
    CHECK(ps[0].reward == 0);
    CHECK_FALSE(ps[0].implied_end);
}

TEST_CASE("converted try then an error by the other team") {
    const auto ps = segment(oracle::numbered({play("A", 1, 1), play("A", 2, 2),
                                              play("A", 3, 3, ends(TerminalKind::try_scored, true)), play("B", 4, 4),
                                              play("B", 5, 5, ends(TerminalKind::error))}));
    REQUIRE(ps.size() == 2);
    CHECK(ps[0].reward == 6);
    CHECK(ps[0].team_id == "A");
    CHECK(ps[1].reward == 0);
    CHECK(ps[1].length() == 2);
}

TEST_CASE("single successful drop goal") {
    const auto ps = segment(oracle::numbered({play("A", 1, 1, ends(TerminalKind::drop_goal_attempt, true))}));
    REQUIRE(ps.size() == 1);
    CHECK(ps[0].length() == 1);
    CHECK(ps[0].reward == 1);
}

TEST_CASE("a team change without a marker is an implied handover") {
    const auto ps = segment(oracle::numbered({play("A", 1, 1), play("A", 2, 2), play("B", 3, 3)}));
    REQUIRE(ps.size() == 2);
    CHECK(ps[0].implied_end);
    CHECK(ps[0].ending.kind == TerminalKind::handover);
    CHECK(ps[0].reward == 0);
    CHECK(ps[1].implied_end);  // match ends without a marker
}

TEST_CASE("period changes split possessions") {
    auto plays = oracle::numbered({play("A", 1, 1), play("A", 2, 2), play("A", 3, 3)});
    plays[2].period = 1;
    CHECK(segment(plays).size() == 2);
}

TEST_CASE("same team continuing after a terminal marker is a corrupt feed") {
    const auto plays = oracle::numbered({play("A", 1, 1, ends(TerminalKind::error)), play("A", 2, 2)});
    CHECK_THROWS_AS(segment(plays), SegmentationError);
}

TEST_CASE("empty input and mixed matches") {
    CHECK(segment({}).empty());
    CHECK_THROWS_AS(segment({play("A", 1, 1, {}, "M1"), play("A", 1, 1, {}, "M2")}), ContractViolation);
}

TEST_CASE("possessions partition the plays and rewards stay in the scoring set") {
    std::vector<Play> plays;
    const TerminalKind kinds[] = {TerminalKind::none, TerminalKind::error, TerminalKind::try_scored,
                                  TerminalKind::penalty_goal_attempt, TerminalKind::drop_goal_attempt};
    std::string team = "A";
    for (int i = 0; i < 200; ++i) {
        const auto kind = kinds[(i * 7) % 5];
        plays.push_back(play(team, i % 68, i % 100, ends(kind, i % 3 == 0)));
        if (kind != TerminalKind::none || i % 11 == 0) team = team == "A" ? "B" : "A";
    }
    plays = oracle::numbered(plays);
    const auto ps = segment(plays);
    std::vector<Play> joined;
    for (const auto& p : ps) {
        joined.insert(joined.end(), p.plays.begin(), p.plays.end());
        CHECK((p.reward == 0 || p.reward == 1 || p.reward == 2 || p.reward == 4 || p.reward == 6));
        for (const auto& q : p.plays) CHECK(q.team_id == p.team_id);
    }
    CHECK(joined == plays);
}

TEST_CASE("matches are segmented separately, in order of first appearance") {
    const std::vector<Play> plays{play("A", 1, 1, {}, "M2"), play("A", 1, 1, {}, "M1"), play("A", 2, 2, {}, "M2")};
    const auto ps = segment_matches(plays);
    REQUIRE(ps.size() == 2);
    CHECK(ps[0].match_id == "M2");
    CHECK(ps[0].length() == 2);
    CHECK(ps[1].match_id == "M1");
}
