#include "epv/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <ostream>

#include <json.hpp>

#include "epv/errors.hpp"

namespace epv::synth {

namespace {

constexpr int kColumns = 14;
constexpr int kRows = 22;
constexpr int kCells = kColumns * kRows;
constexpr int kMaxLength = 26;

std::size_t cell_index(int column, int row) { return static_cast<std::size_t>((row - 1) * kColumns + column - 1); }

std::vector<double> cumulative(const std::vector<double>& w) {
    std::vector<double> c(w.size());
    std::partial_sum(w.begin(), w.end(), c.begin());
    return c;
}

void check_partition(const std::vector<std::vector<int>>& p, int n, const char* what) {
    int expected = 1;
    for (const auto& g : p) {
        if (g.empty()) throw ConfigError(std::string(what) + " regimes contain an empty group");
        for (int u : g) {
            if (u != expected) throw ConfigError(std::string(what) + " regimes must be contiguous and ordered");
            ++expected;
        }
    }
    if (expected - 1 != n) throw ConfigError(std::string(what) + " regimes must cover 1.." + std::to_string(n));
}

void check_distribution(const std::vector<double>& w, const char* what) {
    double sum = 0.0;
    for (double v : w) {
        if (!(v >= 0.0)) throw ConfigError(std::string(what) + " has a negative weight");
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw ConfigError(std::string(what) + " must sum to 1");
}

void normalise(std::vector<double>& w) {
    const double s = std::accumulate(w.begin(), w.end(), 0.0);
    for (double& v : w) v /= s;
}

// Near-equal contiguous split of `n` units into `k` groups, the first
// `n % k` groups (or the last, when `extra_last`) one unit larger.
std::vector<std::vector<int>> split(int first, int n, int k, bool extra_last) {
    std::vector<std::vector<int>> out;
    const int base = n / k;
    const int extra = n % k;
    int next = first;
    for (int g = 0; g < k; ++g) {
        const bool bigger = extra_last ? g >= k - extra : g < extra;
        const int size = base + (bigger ? 1 : 0);
        std::vector<int> group;
        for (int i = 0; i < size; ++i) group.push_back(next++);
        out.push_back(std::move(group));
    }
    return out;
}

// 22 5m row weights from weights per 10m row unit.
std::vector<double> rows_from_units(const std::vector<double>& unit_weights) {
    std::vector<double> rows;
    for (double w : unit_weights) {
        rows.push_back(w / 2.0);
        rows.push_back(w / 2.0);
    }
    return rows;
}

// 14 column weights from weights per mirror class.
std::vector<double> columns_from_classes(const std::vector<double>& class_weights) {
    std::vector<double> cols(kColumns);
    for (int c = 1; c <= kColumns; ++c) {
        const int cls = std::min(c, kColumns + 1 - c);
        cols[static_cast<std::size_t>(c - 1)] = class_weights[static_cast<std::size_t>(cls - 1)] / 2.0;
    }
    return cols;
}

// Zero-sum (over teams) modulation of the class weights.
std::vector<std::vector<double>> team_styles(const std::vector<double>& class_weights, int n_teams, double amplitude) {
    std::vector<std::vector<double>> out;
    for (int t = 0; t < n_teams; ++t) {
        std::vector<double> w(class_weights.size());
        for (std::size_t c = 0; c < w.size(); ++c) {
            const double phase = 2.0 * std::numbers::pi * t / n_teams + 1.7 * static_cast<double>(c);
            w[c] = class_weights[c] * (1.0 + amplitude * std::cos(phase));
        }
        normalise(w);
        out.push_back(columns_from_classes(w));
    }
    return out;
}

double mean_reward(const SynthConfig& c, std::size_t cell) {
    const double try_points = 6.0 * c.conversion_rate + 4.0 * (1.0 - c.conversion_rate);
    return c.try_prob[cell] * try_points + c.penalty_goal_prob[cell] * 2.0 * c.penalty_success +
           c.drop_goal_prob[cell] * 1.0 * c.drop_goal_success;
}

std::vector<double> zone_distribution(const SynthConfig& c, int team) {
    std::vector<double> pi(kCells);
    const auto& style = c.team_style[static_cast<std::size_t>(team)];
    for (int r = 1; r <= kRows; ++r) {
        for (int col = 1; col <= kColumns; ++col) {
            pi[cell_index(col, r)] = c.row_weights[static_cast<std::size_t>(r - 1)] *
                                     style[static_cast<std::size_t>(col - 1)];
        }
    }
    return pi;
}

std::string padded(char prefix, int value, int width) {
    std::string digits = std::to_string(value);
    if (static_cast<int>(digits.size()) < width) digits.insert(0, static_cast<std::size_t>(width) - digits.size(), '0');
    return prefix + digits;
}

}  // namespace

int Rng::below(int n) {
    const int v = static_cast<int>(uniform() * n);
    return std::min(v, n - 1);
}

int Rng::categorical(const std::vector<double>& cum) {
    const double u = uniform() * cum.back();
    auto it = std::upper_bound(cum.begin(), cum.end(), u);
    const auto idx = static_cast<int>(it - cum.begin());
    return std::min(idx, static_cast<int>(cum.size()) - 1);
}

void SynthConfig::validate() const {
    if (n_teams < 2 || n_teams % 2 != 0) throw ConfigError("n_teams must be even and at least 2");
    if (n_matches_per_team < 1) throw ConfigError("n_matches_per_team must be positive");
    if (possessions_per_match < 1) throw ConfigError("possessions_per_match must be positive");
    if (length_weights.empty() || length_weights.size() > kMaxLength) {
        throw ConfigError("length_weights must cover 1..T with T <= 26");
    }
    check_distribution(length_weights, "length_weights");
    if (!(stickiness >= 0.0 && stickiness < 1.0)) throw ConfigError("stickiness must lie in [0, 1)");
    if (row_weights.size() != kRows) throw ConfigError("row_weights needs 22 entries");
    check_distribution(row_weights, "row_weights");
    if (team_style.size() != static_cast<std::size_t>(n_teams)) throw ConfigError("team_style needs one row per team");
    for (const auto& s : team_style) {
        if (s.size() != kColumns) throw ConfigError("team_style rows need 14 column weights");
        check_distribution(s, "team_style");
    }
    for (const auto* v : {&try_prob, &penalty_goal_prob, &drop_goal_prob}) {
        if (v->size() != kCells) throw ConfigError("outcome probabilities need 308 cells");
    }
    for (std::size_t i = 0; i < kCells; ++i) {
        const double a = try_prob[i], b = penalty_goal_prob[i], d = drop_goal_prob[i];
        if (!(a >= 0 && b >= 0 && d >= 0 && a + b + d <= 1.0)) {
            throw ConfigError("outcome probabilities of cell " + std::to_string(i + 1) + " are not a distribution");
        }
    }
    for (double p : {conversion_rate, penalty_success, drop_goal_success}) {
        if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("success rates must lie in [0, 1]");
    }
    if (loss_mix.size() != 3) throw ConfigError("loss_mix needs error, handover and field kick weights");
    check_distribution(loss_mix, "loss_mix");
    check_partition(row_regimes, 11, "row");
    check_partition(column_regimes, 7, "column");
}

std::vector<double> default_length_weights() {
    std::vector<double> w;
    for (int k = 1; k <= kMaxLength; ++k) w.push_back(std::pow(0.8, k - 1));
    normalise(w);
    return w;
}

SynthConfig regime_config(std::uint64_t seed, int row_regimes, int column_regimes, int n_teams) {
    if (row_regimes < 1 || row_regimes > 11) throw ConfigError("row_regimes must lie in 1..11");
    if (column_regimes < 1 || column_regimes > 7) throw ConfigError("column_regimes must lie in 1..7");
    if (n_teams < 2 || n_teams % 2 != 0) throw ConfigError("n_teams must be even and at least 2");
    SynthConfig c;
    c.seed = seed;
    c.n_teams = n_teams;
    c.length_weights = default_length_weights();

    c.column_regimes = split(1, 7, column_regimes, true);
    if (row_regimes == 1) {
        c.row_regimes = {{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11}};
    } else {
        const int bottom = row_regimes <= 10 ? 2 : 1;
        std::vector<int> first;
        for (int u = 1; u <= bottom; ++u) first.push_back(u);
        c.row_regimes = {first};
        auto rest = split(bottom + 1, 11 - bottom, row_regimes - 1, false);
        c.row_regimes.insert(c.row_regimes.end(), rest.begin(), rest.end());
    }

    // Per regime: column-class usage alternates low/high so adjacent regimes
    // stay apart, and the try multiplier grows towards the middle.
    std::vector<double> class_weight(7), class_mult(7);
    for (std::size_t i = 0; i < c.column_regimes.size(); ++i) {
        const double w = column_regimes == 1 ? 1.0 : (i % 2 == 0 ? 0.06 : 0.15) + 0.02 * static_cast<double>(i);
        const double g = column_regimes == 1 ? 1.0 : 0.8 + 0.1 * static_cast<double>(i);
        for (int cls : c.column_regimes[i]) {
            class_weight[static_cast<std::size_t>(cls - 1)] = w;
            class_mult[static_cast<std::size_t>(cls - 1)] = g;
        }
    }
    normalise(class_weight);

    std::vector<double> unit_weight(11), unit_try(11), unit_pen(11), unit_drop(11);
    constexpr double kBottomWeight = 0.02;
    const int n_row = static_cast<int>(c.row_regimes.size());
    double rest_total = 0.0;
    for (int j = 0; j < n_row; ++j) {
        // level runs 0..1 across the regimes above the bottom one
        const double level = n_row <= 2 ? (j == 0 ? 0.0 : 1.0) : (j == 0 ? 0.0 : (j - 1.0) / (n_row - 2.0));
        for (int u : c.row_regimes[static_cast<std::size_t>(j)]) {
            const auto ui = static_cast<std::size_t>(u - 1);
            if (n_row == 1) {
                unit_weight[ui] = 1.0;
                unit_try[ui] = 0.15;
                unit_pen[ui] = 0.02;
                unit_drop[ui] = 0.005;
                continue;
            }
            if (j == 0) {
                unit_weight[ui] = kBottomWeight;
                unit_try[ui] = 0.0;
            } else {
                unit_weight[ui] = 1.0 + level;
                rest_total += unit_weight[ui];
                unit_try[ui] = 0.05 + 0.35 * std::pow(level, 1.5);
                unit_pen[ui] = level >= 0.5 ? 0.03 : 0.0;
                unit_drop[ui] = level >= 1.0 ? 0.01 : 0.0;
            }
        }
    }
    if (n_row > 1) {
        const double bottom_total = kBottomWeight * static_cast<double>(c.row_regimes.front().size());
        for (int j = 1; j < n_row; ++j) {
            for (int u : c.row_regimes[static_cast<std::size_t>(j)]) {
                unit_weight[static_cast<std::size_t>(u - 1)] *= (1.0 - bottom_total) / rest_total;
            }
        }
    }
    normalise(unit_weight);
    c.row_weights = rows_from_units(unit_weight);
    c.team_style = team_styles(class_weight, c.n_teams, 0.2);

    c.try_prob.assign(kCells, 0.0);
    c.penalty_goal_prob.assign(kCells, 0.0);
    c.drop_goal_prob.assign(kCells, 0.0);
    for (int r = 1; r <= kRows; ++r) {
        const auto unit = static_cast<std::size_t>((r - 1) / 2);
        for (int col = 1; col <= kColumns; ++col) {
            const auto cls = static_cast<std::size_t>(std::min(col, kColumns + 1 - col) - 1);
            const auto i = cell_index(col, r);
            c.try_prob[i] = std::min(0.9, unit_try[unit] * class_mult[cls]);
            c.penalty_goal_prob[i] = unit_pen[unit];
            c.drop_goal_prob[i] = unit_drop[unit];
        }
    }
    return c;
}

SynthConfig gradient_config(std::uint64_t seed) {
    SynthConfig c = uniform_config(seed, 0.0);
    c.stickiness = 0.8;
    for (int r = 1; r <= kRows; ++r) {
        const double p = 0.9 * (r - 1) / (kRows - 1.0);
        for (int col = 1; col <= kColumns; ++col) c.try_prob[cell_index(col, r)] = p;
    }
    return c;
}

SynthConfig uniform_config(std::uint64_t seed, double try_prob) {
    SynthConfig c;
    c.seed = seed;
    c.length_weights = default_length_weights();
    c.row_weights.assign(kRows, 1.0 / kRows);
    c.team_style.assign(static_cast<std::size_t>(c.n_teams), std::vector<double>(kColumns, 1.0 / kColumns));
    c.try_prob.assign(kCells, try_prob);
    c.penalty_goal_prob.assign(kCells, 0.0);
    c.drop_goal_prob.assign(kCells, 0.0);
    c.row_regimes = {{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11}};
    c.column_regimes = {{1, 2, 3, 4, 5, 6, 7}};
    return c;
}

AnalyticCellValues analytic_cell_values(const SynthConfig& config, double gamma) {
    config.validate();
    const auto T_max = config.length_weights.size();
    const double lambda = config.stickiness;

    std::vector<double> rbar(kCells);
    for (std::size_t s = 0; s < kCells; ++s) rbar[s] = mean_reward(config, s);

    AnalyticCellValues out{std::vector<double>(kCells, 0.0), std::vector<double>(kCells, 0.0)};
    for (int team = 0; team < config.n_teams; ++team) {
        const auto pi = zone_distribution(config, team);

        // mu[t]: distribution of the cell opening play t + 1.
        // u[k]: expected final-play reward k transitions ahead, from each cell.
        std::vector<std::vector<double>> mu{pi};
        std::vector<std::vector<double>> u{rbar};
        for (std::size_t step = 1; step < T_max; ++step) {
            const auto& m = mu.back();
            const double mass = std::accumulate(m.begin(), m.end(), 0.0);
            std::vector<double> next(kCells);
            for (std::size_t s = 0; s < kCells; ++s) next[s] = lambda * m[s] + (1.0 - lambda) * pi[s] * mass;
            mu.push_back(std::move(next));

            const auto& b = u.back();
            double expected = 0.0;
            for (std::size_t s = 0; s < kCells; ++s) expected += pi[s] * b[s];
            std::vector<double> back(kCells);
            for (std::size_t s = 0; s < kCells; ++s) back[s] = lambda * b[s] + (1.0 - lambda) * expected;
            u.push_back(std::move(back));
        }

        for (std::size_t T = 1; T <= T_max; ++T) {
            const double pT = config.length_weights[T - 1] / config.n_teams;
            if (pT == 0.0) continue;
            for (std::size_t t = 1; t <= T; ++t) {
                const auto ahead = T - t;
                const double discount = std::pow(gamma, static_cast<double>(ahead));
                const auto& m = mu[t - 1];
                const auto& back = u[ahead];
                for (std::size_t s = 0; s < kCells; ++s) {
                    out.numerator[s] += pT * m[s] * discount * back[s];
                    out.denominator[s] += pT * m[s];
                }
            }
        }
    }
    return out;
}

std::vector<std::optional<double>> analytic_epv(const SynthConfig& config, const ZoneSystem& system, double gamma) {
    const auto cells = analytic_cell_values(config, gamma);
    // Generator cells are 5m cells; every supported system has edges on that
    // grid, so the cell centre decides the zone.
    const GridZoneSystem grid = build_grid(5.0);
    const auto zones = static_cast<std::size_t>(system.zone_count());
    std::vector<double> num(zones, 0.0), den(zones, 0.0);
    for (std::size_t s = 0; s < kCells; ++s) {
        const Rect r = grid.bounds(ZoneId{static_cast<int>(s) + 1});
        const auto z = static_cast<std::size_t>(system.zone_of((r.x0 + r.x1) / 2, (r.y0 + r.y1) / 2).index - 1);
        num[z] += cells.numerator[s];
        den[z] += cells.denominator[s];
    }
    std::vector<std::optional<double>> out(zones);
    for (std::size_t z = 0; z < zones; ++z) {
        if (den[z] > 0.0) out[z] = num[z] / den[z];
    }
    return out;
}

std::vector<std::pair<int, int>> schedule(int n_teams, int n_matches_per_team) {
    std::vector<std::pair<int, int>> fixtures;
    const int n = n_teams;
    std::vector<int> ring(static_cast<std::size_t>(n - 1));
    std::iota(ring.begin(), ring.end(), 0);
    for (int round = 0; round < n_matches_per_team; ++round) {
        std::vector<int> r(ring.size());
        for (std::size_t i = 0; i < ring.size(); ++i) {
            r[i] = ring[(i + static_cast<std::size_t>(round)) % ring.size()];
        }
        std::vector<std::pair<int, int>> pairs;
        pairs.emplace_back(n - 1, r[0]);
        for (int i = 1; i < n / 2; ++i) pairs.emplace_back(r[static_cast<std::size_t>(i)], r[static_cast<std::size_t>(n - 1 - i)]);
        for (auto [a, b] : pairs) fixtures.emplace_back(round % 2 == 0 ? a : b, round % 2 == 0 ? b : a);
    }
    return fixtures;
}

void for_each_match(const SynthConfig& config, const std::function<void(std::vector<RawEvent>&&)>& sink) {
    config.validate();
    Rng rng(config.seed);
    const GridZoneSystem grid = build_grid(5.0);
    const auto col_edges = grid.column_edges();
    const auto row_edges = grid.row_edges();

    const auto length_cum = cumulative(config.length_weights);
    const auto loss_cum = cumulative(config.loss_mix);
    std::vector<std::vector<double>> zone_cum;
    for (int t = 0; t < config.n_teams; ++t) zone_cum.push_back(cumulative(zone_distribution(config, t)));

    const auto fixtures = schedule(config.n_teams, config.n_matches_per_team);
    const int id_width = std::max(3, static_cast<int>(std::to_string(fixtures.size()).size()));
    int match_no = 0;
    for (auto [home, away] : fixtures) {
        ++match_no;
        const std::string match_id = padded('M', match_no, id_width);
        std::vector<RawEvent> events;
        int set_number = 0;
        for (int i = 0; i < 2 * config.possessions_per_match; ++i) {
            const int team = i % 2 == 0 ? home : away;
            const std::string team_id = padded('T', team + 1, 2);
            const auto& cum = zone_cum[static_cast<std::size_t>(team)];
            const int length = rng.categorical(length_cum) + 1;
            int cell = rng.categorical(cum);
            for (int t = 1; t <= length; ++t) {
                if (t > 1 && !(rng.uniform() < config.stickiness)) cell = rng.categorical(cum);
                if ((t - 1) % 6 == 0) ++set_number;
                const auto [col, row] = grid.cell_of(ZoneId{cell + 1});
                const int x0 = static_cast<int>(col_edges[static_cast<std::size_t>(col - 1)]);
                const int x1 = static_cast<int>(col_edges[static_cast<std::size_t>(col)]);
                const int y0 = static_cast<int>(row_edges[static_cast<std::size_t>(row - 1)]);
                const int y1 = static_cast<int>(row_edges[static_cast<std::size_t>(row)]);

                RawEvent e;
                e.match_id = match_id;
                e.team_id = team_id;
                e.set_number = set_number;
                e.play_number = (t - 1) % 6 + 1;
                e.x = x0 + rng.below(x1 - x0);
                e.y = y0 + rng.below(y1 - y0);
                if (t == length) {
                    const auto c = static_cast<std::size_t>(cell);
                    const double u = rng.uniform();
                    const double p_try = config.try_prob[c];
                    const double p_pen = config.penalty_goal_prob[c];
                    const double p_drop = config.drop_goal_prob[c];
                    if (u < p_try) {
                        e.action = Action::try_scored;
                        e.outcome = rng.uniform() < config.conversion_rate ? Outcome::converted : Outcome::unconverted;
                    } else if (u < p_try + p_pen) {
                        e.action = Action::penalty_goal;
                        e.outcome = rng.uniform() < config.penalty_success ? Outcome::made : Outcome::missed;
                    } else if (u < p_try + p_pen + p_drop) {
                        e.action = Action::drop_goal;
                        e.outcome = rng.uniform() < config.drop_goal_success ? Outcome::made : Outcome::missed;
                    } else {
                        static constexpr Action kLoss[] = {Action::error, Action::handover, Action::field_kick};
                        e.action = kLoss[rng.categorical(loss_cum)];
                    }
                }
                events.push_back(std::move(e));
            }
        }
        sink(std::move(events));
    }
}

GroundTruth ground_truth(const SynthConfig& config, double gamma) {
    config.validate();
    GroundTruth truth;
    truth.seed = config.seed;
    truth.gamma = gamma;
    truth.possession_count = static_cast<long long>(config.n_teams) / 2 * config.n_matches_per_team * 2 *
                             config.possessions_per_match;
    truth.row_regimes = config.row_regimes;
    truth.column_regimes = config.column_regimes;

    const auto cells = analytic_cell_values(config, gamma);
    truth.analytic_epv.resize(kCells);
    for (std::size_t s = 0; s < kCells; ++s) {
        if (cells.denominator[s] > 0.0) truth.analytic_epv[s] = cells.numerator[s] / cells.denominator[s];
    }
    // Expected match return per team-match: possessions x expected credited
    // return per possession, folded onto mirror classes and 10m row units.
    truth.expected_column_unit_returns.assign(7, 0.0);
    truth.expected_row_unit_returns.assign(11, 0.0);
    for (int r = 1; r <= kRows; ++r) {
        for (int col = 1; col <= kColumns; ++col) {
            const double g = config.possessions_per_match * cells.numerator[cell_index(col, r)];
            truth.expected_column_unit_returns[static_cast<std::size_t>(std::min(col, kColumns + 1 - col) - 1)] += g;
            truth.expected_row_unit_returns[static_cast<std::size_t>((r - 1) / 2)] += g;
        }
    }
    return truth;
}

Season generate_season(const SynthConfig& config, double gamma) {
    Season season;
    season.truth = ground_truth(config, gamma);
    for_each_match(config, [&](std::vector<RawEvent>&& events) {
        season.events.insert(season.events.end(), std::make_move_iterator(events.begin()),
                             std::make_move_iterator(events.end()));
    });
    season.truth.play_count = static_cast<long long>(season.events.size());
    return season;
}

void write_truth_json(std::ostream& out, const GroundTruth& truth) {
    nlohmann::ordered_json j;
    j["seed"] = truth.seed;
    j["gamma"] = truth.gamma;
    j["possession_count"] = truth.possession_count;
    j["play_count"] = truth.play_count;
    nlohmann::ordered_json epv = nlohmann::ordered_json::array();
    for (const auto& v : truth.analytic_epv) {
        if (v) {
            epv.push_back(*v);
        } else {
            epv.push_back(nullptr);
        }
    }
    j["analytic_epv"] = std::move(epv);
    j["regime_partition"] = {{"rows", truth.row_regimes}, {"columns", truth.column_regimes}};
    j["expected_unit_returns"] = {{"columns", truth.expected_column_unit_returns},
                                  {"rows", truth.expected_row_unit_returns}};
    out << j.dump(2) << '\n';
}

}  // namespace epv::synth
