#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace epv {

enum class Action { play, error, handover, field_kick, penalty_goal, drop_goal, try_scored };
enum class Outcome { none, made, missed, converted, unconverted };
enum class AttackDirection { up, down };

std::string_view to_token(Action action);
std::string_view to_token(Outcome outcome);
Action parse_action(std::string_view token, std::size_t line = 0);
Outcome parse_outcome(std::string_view token, std::size_t line = 0);

/// One row of the events CSV.
struct RawEvent {
    std::string match_id;
    std::string team_id;
    int set_number = 1;
    int play_number = 1;
    double x = 0.0;
    double y = 0.0;
    Action action = Action::play;
    Outcome outcome = Outcome::none;
    std::optional<AttackDirection> direction;  // only from the optional `direction` column
    int period = 0;                            // 0 when the feed carries no `period` column
    std::size_t line = 0;
};

enum class TerminalKind { none, error, handover, field_kick, penalty_goal_attempt, drop_goal_attempt, try_scored };

/// How a possession ended. `success` is the made/converted flag for goal
/// attempts and tries and is false for every other kind.
struct TerminalMarker {
    TerminalKind kind = TerminalKind::none;
    bool success = false;

    bool ends_possession() const { return kind != TerminalKind::none; }
    friend bool operator==(const TerminalMarker&, const TerminalMarker&) = default;
};

std::string to_token(const TerminalMarker& marker);
TerminalMarker parse_marker(std::string_view token, std::size_t line = 0);

/// Opening location of one play, already oriented so the team in possession
/// attacks towards y = 100.
struct Play {
    std::string match_id;
    std::string team_id;
    int order = 0;  // 1-based position within the match
    int period = 0;
    double x = 0.0;
    double y = 0.0;
    TerminalMarker terminal;

    friend bool operator==(const Play&, const Play&) = default;
};

/// Canonical header: match_id,team_id,set_number,play_number,x,y,action,outcome.
/// Optional trailing columns `direction` (up|down) and `period` are recognised
/// by name.
std::vector<RawEvent> parse_events(std::istream& in);
std::vector<RawEvent> parse_events(const std::filesystem::path& file);

void write_events(std::ostream& out, const std::vector<RawEvent>& events);

enum class Orientation { attacking_frame, raw };

Orientation parse_orientation(std::string_view token);

/// Orients every event into the attacking frame and attaches terminal markers.
/// In raw mode events attacking "down" are reflected: x' = 68 - x, y' = 100 - y.
std::vector<Play> normalize(const std::vector<RawEvent>& events, Orientation orientation);

TerminalMarker marker_for(Action action, Outcome outcome);

/// Play store written by `epv ingest`:
/// match_id,team_id,order,period,x,y,marker
void write_plays(std::ostream& out, const std::vector<Play>& plays);
std::vector<Play> read_plays(std::istream& in);
std::vector<Play> read_plays(const std::filesystem::path& file);

}  // namespace epv
