#pragma once

#include <string>
#include <vector>

#include "epv/events.hpp"

namespace epv {

/// One attacking possession: the plays of a single team from gaining the ball
/// until it is lost or points are scored.
struct Possession {
    std::string match_id;
    std::string team_id;
    std::vector<Play> plays;
    /// How the possession ended. When the feed had no explicit marker (the
    /// other team simply appears, the period or match ends) this is an implied
    /// handover and `implied_end` is set.
    TerminalMarker ending;
    bool implied_end = false;
    int reward = 0;

    int length() const { return static_cast<int>(plays.size()); }
};

/// Points awarded for a possession ending: converted try 6, unconverted try 4,
/// penalty goal 2, drop goal 1, anything else 0.
int assign_reward(const TerminalMarker& marker);

/// Splits one match's plays into possessions. A new possession starts after a
/// terminal marker, on a change of team, and on a change of period.
std::vector<Possession> segment(const std::vector<Play>& plays);

/// Segments a multi-match play list, keeping matches in order of first
/// appearance. Plays of one match need not be contiguous.
std::vector<Possession> segment_matches(const std::vector<Play>& plays);

}  // namespace epv
