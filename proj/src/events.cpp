#include "epv/events.hpp"

#include <array>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>

#include "epv/errors.hpp"
#include "text_util.hpp"

namespace epv {

namespace {

constexpr std::array<std::string_view, 8> kEventColumns{"match_id", "team_id", "set_number", "play_number",
                                                         "x",        "y",       "action",     "outcome"};

constexpr double kWidth = 68.0;
constexpr double kYMin = -10.0;
constexpr double kYMax = 110.0;

std::string fmt_coord(double v) {
    // Coordinates are whole metres in every feed we produce; keep them that way.
    if (v == static_cast<double>(static_cast<long long>(v))) return std::to_string(static_cast<long long>(v));
    std::array<char, 32> buf{};
    auto [p, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), p);
}

void check_combination(Action action, Outcome outcome, std::size_t line) {
    bool ok = false;
    switch (action) {
        case Action::try_scored:
            ok = outcome == Outcome::converted || outcome == Outcome::unconverted;
            break;
        case Action::penalty_goal:
        case Action::drop_goal:
            ok = outcome == Outcome::made || outcome == Outcome::missed;
            break;
        default:
            ok = outcome == Outcome::none;
    }
    if (!ok) {
        throw ParseError("outcome '" + std::string(to_token(outcome)) + "' is not valid for action '" +
                             std::string(to_token(action)) + "'",
                         line);
    }
}

}  // namespace

std::string_view to_token(Action action) {
    switch (action) {
        case Action::play: return "play";
        case Action::error: return "error";
        case Action::handover: return "handover";
        case Action::field_kick: return "field_kick";
        case Action::penalty_goal: return "penalty_goal";
        case Action::drop_goal: return "drop_goal";
        case Action::try_scored: return "try";
    }
    return "play";
}

std::string_view to_token(Outcome outcome) {
    switch (outcome) {
        case Outcome::none: return "";
        case Outcome::made: return "made";
        case Outcome::missed: return "missed";
        case Outcome::converted: return "converted";
        case Outcome::unconverted: return "unconverted";
    }
    return "";
}

Action parse_action(std::string_view token, std::size_t line) {
    static const std::map<std::string_view, Action> table{
        {"play", Action::play},           {"error", Action::error},         {"handover", Action::handover},
        {"field_kick", Action::field_kick}, {"penalty_goal", Action::penalty_goal},
        {"drop_goal", Action::drop_goal}, {"try", Action::try_scored}};
    auto it = table.find(token);
    if (it == table.end()) throw UnknownAction("unknown action '" + std::string(token) + "'", line);
    return it->second;
}

Outcome parse_outcome(std::string_view token, std::size_t line) {
    static const std::map<std::string_view, Outcome> table{{"", Outcome::none},
                                                           {"made", Outcome::made},
                                                           {"missed", Outcome::missed},
                                                           {"converted", Outcome::converted},
                                                           {"unconverted", Outcome::unconverted}};
    auto it = table.find(token);
    if (it == table.end()) throw UnknownAction("unknown outcome '" + std::string(token) + "'", line);
    return it->second;
}

TerminalMarker marker_for(Action action, Outcome outcome) {
    switch (action) {
        case Action::play: return {};
        case Action::error: return {TerminalKind::error, false};
        case Action::handover: return {TerminalKind::handover, false};
        case Action::field_kick: return {TerminalKind::field_kick, false};
        case Action::penalty_goal: return {TerminalKind::penalty_goal_attempt, outcome == Outcome::made};
        case Action::drop_goal: return {TerminalKind::drop_goal_attempt, outcome == Outcome::made};
        case Action::try_scored: return {TerminalKind::try_scored, outcome == Outcome::converted};
    }
    return {};
}

std::string to_token(const TerminalMarker& marker) {
    switch (marker.kind) {
        case TerminalKind::none: return "none";
        case TerminalKind::error: return "error";
        case TerminalKind::handover: return "handover";
        case TerminalKind::field_kick: return "field_kick";
        case TerminalKind::penalty_goal_attempt: return marker.success ? "penalty_goal_made" : "penalty_goal_missed";
        case TerminalKind::drop_goal_attempt: return marker.success ? "drop_goal_made" : "drop_goal_missed";
        case TerminalKind::try_scored: return marker.success ? "try_converted" : "try_unconverted";
    }
    return "none";
}

TerminalMarker parse_marker(std::string_view token, std::size_t line) {
    static const std::map<std::string_view, TerminalMarker> table{
        {"none", {}},
        {"error", {TerminalKind::error, false}},
        {"handover", {TerminalKind::handover, false}},
        {"field_kick", {TerminalKind::field_kick, false}},
        {"penalty_goal_made", {TerminalKind::penalty_goal_attempt, true}},
        {"penalty_goal_missed", {TerminalKind::penalty_goal_attempt, false}},
        {"drop_goal_made", {TerminalKind::drop_goal_attempt, true}},
        {"drop_goal_missed", {TerminalKind::drop_goal_attempt, false}},
        {"try_converted", {TerminalKind::try_scored, true}},
        {"try_unconverted", {TerminalKind::try_scored, false}}};
    auto it = table.find(token);
    if (it == table.end()) throw UnknownAction("unknown terminal marker '" + std::string(token) + "'", line);
    return it->second;
}

std::vector<RawEvent> parse_events(std::istream& in) {
    std::string header_line;
    if (!std::getline(in, header_line)) throw ParseError("missing header", 1);
    const auto header = detail::split(header_line);

    std::map<std::string_view, std::size_t> index;
    for (std::size_t i = 0; i < header.size(); ++i) index.emplace(header[i], i);
    std::array<std::size_t, kEventColumns.size()> col{};
    for (std::size_t i = 0; i < kEventColumns.size(); ++i) {
        auto it = index.find(kEventColumns[i]);
        if (it == index.end()) throw ParseError("header lacks column '" + std::string(kEventColumns[i]) + "'", 1);
        col[i] = it->second;
    }
    const auto direction_col = index.contains("direction") ? std::optional(index.at("direction")) : std::nullopt;
    const auto period_col = index.contains("period") ? std::optional(index.at("period")) : std::nullopt;

    std::vector<RawEvent> events;
    std::string line;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        const auto f = detail::split(line);
        if (f.size() != header.size()) {
            throw ParseError("expected " + std::to_string(header.size()) + " fields, found " +
                                 std::to_string(f.size()),
                             line_no);
        }
        RawEvent e;
        e.line = line_no;
        e.match_id = std::string(f[col[0]]);
        e.team_id = std::string(f[col[1]]);
        if (e.match_id.empty() || e.team_id.empty()) throw ParseError("empty match_id or team_id", line_no);

        auto set_number = detail::to_int(f[col[2]]);
        auto play_number = detail::to_int(f[col[3]]);
        if (!set_number || !play_number) throw ParseError("set_number and play_number must be integers", line_no);
        if (*set_number < 1 || *play_number < 1) throw ParseError("set_number and play_number start at 1", line_no);
        e.set_number = static_cast<int>(*set_number);
        e.play_number = static_cast<int>(*play_number);

        auto x = detail::to_double(f[col[4]]);
        auto y = detail::to_double(f[col[5]]);
        if (!x || !y) throw ParseError("x and y must be numeric", line_no);
        if (*x < 0.0 || *x > kWidth) throw InvalidCoordinate("x = " + std::string(f[col[4]]) + " outside [0, 68]", line_no);
        if (*y < kYMin || *y > kYMax) {
            throw InvalidCoordinate("y = " + std::string(f[col[5]]) + " outside [-10, 110]", line_no);
        }
        e.x = *x;
        e.y = *y;

        e.action = parse_action(f[col[6]], line_no);
        e.outcome = parse_outcome(f[col[7]], line_no);
        check_combination(e.action, e.outcome, line_no);

        if (direction_col) {
            const auto d = f[*direction_col];
            if (d == "up") {
                e.direction = AttackDirection::up;
            } else if (d == "down") {
                e.direction = AttackDirection::down;
            } else if (!d.empty()) {
                throw ParseError("direction must be 'up' or 'down'", line_no);
            }
        }
        if (period_col) {
            auto p = detail::to_int(f[*period_col]);
            if (!p || *p < 0) throw ParseError("period must be a non-negative integer", line_no);
            e.period = static_cast<int>(*p);
        }
        events.push_back(std::move(e));
    }
    return events;
}

std::vector<RawEvent> parse_events(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ParseError("cannot open " + file.string());
    return parse_events(in);
}

void write_events(std::ostream& out, const std::vector<RawEvent>& events) {
    out << "match_id,team_id,set_number,play_number,x,y,action,outcome\n";
    for (const auto& e : events) {
        out << e.match_id << ',' << e.team_id << ',' << e.set_number << ',' << e.play_number << ','
            << fmt_coord(e.x) << ',' << fmt_coord(e.y) << ',' << to_token(e.action) << ',' << to_token(e.outcome)
            << '\n';
    }
}

Orientation parse_orientation(std::string_view token) {
    if (token == "attacking-frame") return Orientation::attacking_frame;
    if (token == "raw") return Orientation::raw;
    throw ConfigError("orientation must be 'attacking-frame' or 'raw', got '" + std::string(token) + "'");
}

std::vector<Play> normalize(const std::vector<RawEvent>& events, Orientation orientation) {
    std::vector<Play> plays;
    plays.reserve(events.size());
    std::map<std::string, int> order;
    for (const auto& e : events) {
        Play p;
        p.match_id = e.match_id;
        p.team_id = e.team_id;
        p.order = ++order[e.match_id];
        p.period = e.period;
        p.x = e.x;
        p.y = e.y;
        if (orientation == Orientation::raw) {
            if (!e.direction) throw MissingDirection("raw orientation needs a direction on every row", e.line);
            if (*e.direction == AttackDirection::down) {
                p.x = kWidth - e.x;
                p.y = 100.0 - e.y;
            }
        }
        p.terminal = marker_for(e.action, e.outcome);
        plays.push_back(std::move(p));
    }
    return plays;
}

void write_plays(std::ostream& out, const std::vector<Play>& plays) {
    out << "match_id,team_id,order,period,x,y,marker\n";
    for (const auto& p : plays) {
        out << p.match_id << ',' << p.team_id << ',' << p.order << ',' << p.period << ',' << fmt_coord(p.x) << ','
            << fmt_coord(p.y) << ',' << to_token(p.terminal) << '\n';
    }
}

std::vector<Play> read_plays(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || detail::trim(line) != "match_id,team_id,order,period,x,y,marker") {
        throw ParseError("not a play store (bad header)", 1);
    }
    std::vector<Play> plays;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        const auto f = detail::split(line);
        if (f.size() != 7) throw ParseError("expected 7 fields", line_no);
        Play p;
        p.match_id = std::string(f[0]);
        p.team_id = std::string(f[1]);
        auto order = detail::to_int(f[2]);
        auto period = detail::to_int(f[3]);
        auto x = detail::to_double(f[4]);
        auto y = detail::to_double(f[5]);
        if (!order || !period || !x || !y) throw ParseError("malformed numeric field", line_no);
        if (*x < 0.0 || *x > kWidth || *y < kYMin || *y > kYMax) throw InvalidCoordinate("play off the pitch", line_no);
        p.order = static_cast<int>(*order);
        p.period = static_cast<int>(*period);
        p.x = *x;
        p.y = *y;
        p.terminal = parse_marker(f[6], line_no);
        plays.push_back(std::move(p));
    }
    return plays;
}

std::vector<Play> read_plays(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ParseError("cannot open " + file.string());
    return read_plays(in);
}

}  // namespace epv
