#include "epv/possession.hpp"

#include <map>

#include "epv/errors.hpp"

namespace epv {

int assign_reward(const TerminalMarker& marker) {
    switch (marker.kind) {
        case TerminalKind::none:
            throw ContractViolation("reward requested for a play without a terminal marker");
        case TerminalKind::try_scored:
            return marker.success ? 6 : 4;
        case TerminalKind::penalty_goal_attempt:
            return marker.success ? 2 : 0;
        case TerminalKind::drop_goal_attempt:
            return marker.success ? 1 : 0;
        case TerminalKind::error:
        case TerminalKind::handover:
        case TerminalKind::field_kick:
            return 0;
    }
    return 0;
}

namespace {

void close(std::vector<Possession>& out, Possession& current) {
    if (current.plays.empty()) return;
    const auto& last = current.plays.back().terminal;
    if (last.ends_possession()) {
        current.ending = last;
        current.implied_end = false;
    } else {
        current.ending = TerminalMarker{TerminalKind::handover, false};
        current.implied_end = true;
    }
    current.reward = assign_reward(current.ending);
    out.push_back(std::move(current));
    current = Possession{};
}

}  // namespace

std::vector<Possession> segment(const std::vector<Play>& plays) {
    std::vector<Possession> out;
    if (plays.empty()) return out;
    const std::string& match = plays.front().match_id;

    Possession current;
    for (const auto& play : plays) {
        if (play.match_id != match) {
            throw ContractViolation("segment() expects one match, found '" + match + "' and '" + play.match_id + "'");
        }
        if (!current.plays.empty()) {
            const Play& prev = current.plays.back();
            const bool same_team = prev.team_id == play.team_id;
            const bool same_period = prev.period == play.period;
            if (prev.terminal.ends_possession()) {
                if (same_team && same_period) {
                    throw SegmentationError("match " + match + ": team " + play.team_id +
                                            " keeps the ball after a possession-ending play (order " +
                                            std::to_string(prev.order) + ")");
                }
                close(out, current);
            } else if (!same_team || !same_period) {
                close(out, current);
            }
        }
        if (current.plays.empty()) {
            current.match_id = play.match_id;
            current.team_id = play.team_id;
        }
        current.plays.push_back(play);
    }
    close(out, current);
    return out;
}

std::vector<Possession> segment_matches(const std::vector<Play>& plays) {
    std::vector<std::string> order;
    std::map<std::string, std::vector<Play>> by_match;
    for (const auto& p : plays) {
        auto [it, inserted] = by_match.try_emplace(p.match_id);
        if (inserted) order.push_back(p.match_id);
        it->second.push_back(p);
    }
    std::vector<Possession> out;
    for (const auto& id : order) {
        auto part = segment(by_match[id]);
        out.insert(out.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
    }
    return out;
}

}  // namespace epv
