#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "epv/events.hpp"
#include "epv/pitch.hpp"

namespace epv::synth {

/// Parameters of the synthetic season generator.
///
/// Each possession draws its length T from `length_weights`, opens in a 5m
/// cell drawn from the team's zone distribution, and at every following play
/// either stays in the same cell (probability `stickiness`) or redraws from
/// the team's distribution. The last play ends the possession with an outcome
/// drawn from the cell's try / penalty goal / drop goal probabilities.
///
/// A team's zone distribution is `row_weights[row] * team_style[team][column]`.
struct SynthConfig {
    std::uint64_t seed = 1;
    int n_teams = 12;
    int n_matches_per_team = 29;
    int possessions_per_match = 28;  // per team per match

    std::vector<double> length_weights;            // P(T = k), k = 1..size (at most 26)
    double stickiness = 0.3;
    std::vector<double> row_weights;               // 22 5m rows, sums to 1
    std::vector<std::vector<double>> team_style;   // n_teams x 14 columns, each sums to 1

    std::vector<double> try_prob;            // per 5m cell (308)
    std::vector<double> penalty_goal_prob;   // per 5m cell
    std::vector<double> drop_goal_prob;      // per 5m cell
    double conversion_rate = 0.74;
    double penalty_success = 0.88;
    double drop_goal_success = 0.47;
    std::vector<double> loss_mix{0.45, 0.15, 0.40};  // error, handover, field kick

    /// Ground-truth partitions: 10m row units (1..11) and mirror classes (1..7).
    std::vector<std::vector<int>> row_regimes;
    std::vector<std::vector<int>> column_regimes;

    void validate() const;
};

/// Geometric-like lengths over 1..26 with median 4.
std::vector<double> default_length_weights();

/// Season whose column and row match returns follow the requested number of
/// regimes. Adjacent regimes differ by several units of match return; units
/// inside a regime share their parameters. With two or more row regimes the
/// bottom one covers -10m..10m and holds under 5% of the plays.
SynthConfig regime_config(std::uint64_t seed, int row_regimes = 4, int column_regimes = 6, int n_teams = 12);

/// Uniform zone usage, try probability rising linearly with every 5m row.
SynthConfig gradient_config(std::uint64_t seed);

/// Uniform zone usage and a try probability shared by every cell.
SynthConfig uniform_config(std::uint64_t seed, double try_prob);

/// mt19937_64 with the bit-level conversions fixed here, so generated files
/// depend only on the seed: uniform() is the top 53 bits scaled by 2^-53,
/// categorical() inverts the cumulative weights, below(n) is floor(u * n).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    int below(int n);
    /// Index drawn with probability proportional to the weights behind the
    /// cumulative sums.
    int categorical(const std::vector<double>& cumulative);

private:
    std::mt19937_64 engine_;
};

struct GroundTruth {
    std::uint64_t seed = 0;
    long long possession_count = 0;
    long long play_count = 0;
    double gamma = 1.0;
    std::vector<std::optional<double>> analytic_epv;  // per 5m cell
    std::vector<std::vector<int>> row_regimes;
    std::vector<std::vector<int>> column_regimes;
    std::vector<double> expected_column_unit_returns;  // per mirror class, per team-match
    std::vector<double> expected_row_unit_returns;     // per 10m row unit, per team-match
};

struct Season {
    std::vector<RawEvent> events;
    GroundTruth truth;
};

/// Expected credited return and expected visits per possession for every 5m
/// cell, averaged over teams. EPV(cell) = numerator / denominator.
struct AnalyticCellValues {
    std::vector<double> numerator;
    std::vector<double> denominator;
};

AnalyticCellValues analytic_cell_values(const SynthConfig& config, double gamma);

/// Closed-form EPV for any zone system whose edges lie on the 5m grid: the
/// ratio of summed expectations over the 5m cells inside each zone.
std::vector<std::optional<double>> analytic_epv(const SynthConfig& config, const ZoneSystem& system, double gamma);

/// Fixture list: per round every team plays once (circle method).
std::vector<std::pair<int, int>> schedule(int n_teams, int n_matches_per_team);

/// Streams the season one match at a time, in chronological order.
void for_each_match(const SynthConfig& config, const std::function<void(std::vector<RawEvent>&&)>& sink);

Season generate_season(const SynthConfig& config, double gamma = 1.0);

GroundTruth ground_truth(const SynthConfig& config, double gamma = 1.0);

void write_truth_json(std::ostream& out, const GroundTruth& truth);

}  // namespace epv::synth
