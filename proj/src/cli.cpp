#include "epv/cli.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "epv/aggregation.hpp"
#include "epv/analysis.hpp"
#include "epv/errors.hpp"
#include "epv/events.hpp"
#include "epv/heatmap.hpp"
#include "epv/pitch.hpp"
#include "epv/possession.hpp"
#include "epv/serialize.hpp"
#include "epv/synth.hpp"
#include "epv/valuation.hpp"
#include "text_util.hpp"

namespace epv {

namespace {

// Writes through a temporary buffer so a failed command leaves no partial file.
void write_file(const std::string& path, const std::function<void(std::ostream&)>& body) {
    std::ostringstream buffer;
    body(buffer);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path);
    out << buffer.str();
    if (!out) throw ConfigError("failed writing " + path);
}

std::vector<Possession> load_possessions(const std::string& plays_file) {
    return segment_matches(read_plays(plays_file));
}

std::pair<int, int> parse_k_range(const std::string& text) {
    const auto dots = text.find("..");
    const auto lo = detail::to_int(text.substr(0, dots));
    const auto hi = dots == std::string::npos ? lo : detail::to_int(text.substr(dots + 2));
    if (!lo || !hi) throw ConfigError("--k expects N or A..B, got '" + text + "'");
    return {static_cast<int>(*lo), static_cast<int>(*hi)};
}

std::vector<HeatZone> zone_geometry(const ZoneSystem& system) {
    std::vector<HeatZone> zones;
    for (int z = 1; z <= system.zone_count(); ++z) zones.push_back({z, system.bounds(ZoneId{z}), std::nullopt});
    return zones;
}

struct Options {
    // shared
    std::string plays, out, system_file, model;
    double gamma = 1.0;
    // ingest
    std::string events, orient = "attacking-frame";
    // epv
    std::vector<std::string> grid{"5"};
    // aggregate
    double threshold = 1.0, alpha = 0.05, min_share = 0.05;
    bool no_fold = false;
    std::vector<int> force_full, never_full;
    // repro
    std::string k = "1..10", summary, json;
    // zscore
    std::string heatmap;
    // heatmap
    std::string title;
    // synth
    std::uint64_t seed = 1;
    std::string preset = "regime", truth;
    int row_regimes = 4, column_regimes = 6, teams = 12, matches = 29, possessions = 28;
    double try_prob = 0.2;
    // system
    double cell = 5;
};

int cmd_ingest(const Options& o, std::ostream& out) {
    const auto events = parse_events(std::filesystem::path(o.events));
    const auto plays = normalize(events, parse_orientation(o.orient));
    const auto possessions = segment_matches(plays);
    std::map<std::string, int> matches;
    for (const auto& p : plays) matches.emplace(p.match_id, 0);
    write_file(o.out, [&](std::ostream& f) { write_plays(f, plays); });
    out << "rows " << events.size() << ", matches " << matches.size() << ", possessions " << possessions.size()
        << '\n';
    return 0;
}

int cmd_epv(const Options& o, std::ostream& out) {
    const ValuationConfig config{o.gamma};
    config.validate();
    std::optional<ZoneSystem> system;
    const auto& g = o.grid;
    if (g.size() == 2 && g[0] == "agg") {
        system = read_zone_system(std::filesystem::path(g[1]));
    } else if (g.size() == 1 && (g[0] == "5" || g[0] == "10")) {
        system = ZoneSystem::from_grid(build_grid(g[0] == "5" ? 5.0 : 10.0));
    } else {
        throw ConfigError("--grid expects 5, 10 or 'agg FILE'");
    }
    const auto possessions = load_possessions(o.plays);
    const auto model = estimate_epv(possessions, *system, config);
    write_file(o.out, [&](std::ostream& f) { write_model_json(f, model); });
    int valued = 0;
    for (const auto& v : model.values) valued += v ? 1 : 0;
    out << "zones " << model.zone_count() << ", with data " << valued << ", possessions " << possessions.size()
        << '\n';
    return 0;
}

int cmd_aggregate(const Options& o, std::ostream& out) {
    AggregationConfig config;
    config.test.threshold = o.threshold;
    config.test.alpha = o.alpha;
    config.test.validate();
    config.fold_columns = !o.no_fold;
    config.full_width.min_play_share = o.min_share;
    config.full_width.force = o.force_full;
    config.full_width.never = o.never_full;
    const ValuationConfig valuation{o.gamma};
    valuation.validate();

    const auto possessions = load_possessions(o.plays);
    const auto grid = ZoneSystem::from_grid(build_grid(5.0));
    const auto matrices = all_match_returns(possessions, grid, valuation);
    const auto agg = build_aggregated_system(matrices, config);
    write_file(o.out, [&](std::ostream& f) { write_aggregated_json(f, agg); });
    out << "zones " << agg.zone_count() << ", column groups " << agg.column_groups.size() << ", row groups "
        << agg.row_groups.size() << ", full-width rows " << agg.full_width_rows.size() << '\n';
    return 0;
}

int cmd_repro(const Options& o, std::ostream& out, std::ostream& err) {
    const auto [k_min, k_max] = parse_k_range(o.k);
    if (k_min < 1 || k_max > 10 || k_min > k_max) throw ConfigError("--k must lie within 1..10");
    const ValuationConfig valuation{o.gamma};
    valuation.validate();
    const auto system = read_zone_system(std::filesystem::path(o.system_file));
    const auto possessions = load_possessions(o.plays);
    const auto matrices = all_match_returns(possessions, system, valuation);
    const auto seasons = team_seasons(matrices);
    const auto study = reproducibility_study(seasons, k_min, k_max);
    for (const auto& m : study.excluded_matches) err << "excluded zero-return match " << m << '\n';
    for (const auto& w : study.warnings) err << "warning: " << w << '\n';

    write_file(o.out, [&](std::ostream& f) { write_repro_csv(f, study); });
    if (!o.summary.empty()) write_file(o.summary, [&](std::ostream& f) { write_repro_summary_csv(f, study); });
    if (!o.json.empty()) write_file(o.json, [&](std::ostream& f) { write_repro_json(f, study); });
    for (const auto& s : study.summary) {
        out << "k=" << s.k << " teams " << s.teams << " non-infinity " << format_number(s.mean_pct) << " +- "
            << format_number(s.sd_pct) << '\n';
    }
    return 0;
}

int cmd_zscore(const Options& o, std::ostream& out) {
    const ValuationConfig valuation{o.gamma};
    valuation.validate();
    const auto system = read_zone_system(std::filesystem::path(o.system_file));
    const auto possessions = load_possessions(o.plays);
    const auto matrices = all_match_returns(possessions, system, valuation);
    std::vector<RewardDistribution> dists;
    for (const auto& season : team_seasons(matrices)) {
        dists.push_back(pooled_distribution(std::span<const MatchReturnMatrix>(season.matches)));
    }
    const auto profile = zscore_profile(dists);
    write_file(o.out, [&](std::ostream& f) { write_zscore_csv(f, profile); });
    if (!o.json.empty()) write_file(o.json, [&](std::ostream& f) { write_zscore_json(f, profile); });
    if (!o.heatmap.empty()) {
        std::vector<HeatPanel> panels;
        for (std::size_t t = 0; t < profile.teams.size(); ++t) {
            HeatPanel panel{profile.teams[t], zone_geometry(system)};
            for (auto& z : panel.zones) z.value = profile.z[static_cast<std::size_t>(z.id - 1)][t];
            panels.push_back(std::move(panel));
        }
        HeatmapStyle style;
        style.scale = ColorScale::diverging;
        write_file(o.heatmap, [&](std::ostream& f) { f << render_heatmap(panels, style); });
    }
    out << "teams " << profile.teams.size() << ", zones " << profile.zone_count() << '\n';
    return 0;
}

int cmd_heatmap(const Options& o, std::ostream& out) {
    std::ifstream in(o.model);
    if (!in) throw ParseError("cannot open " + o.model);
    const auto doc = read_model_document(in);
    HeatPanel panel;
    panel.title = o.title.empty() ? doc.label + " EPV (gamma " + format_number(doc.gamma) + ")" : o.title;
    for (const auto& z : doc.zones) panel.zones.push_back({z.id, z.bounds, z.epv});
    const std::vector<HeatPanel> panels{std::move(panel)};
    write_file(o.out, [&](std::ostream& f) { f << render_heatmap(panels); });
    out << "zones " << doc.zones.size() << '\n';
    return 0;
}

int cmd_synth(const Options& o, std::ostream& out) {
    synth::SynthConfig config;
    if (o.preset == "regime") {
        config = synth::regime_config(o.seed, o.row_regimes, o.column_regimes, o.teams);
    } else {
        config = o.preset == "gradient" ? synth::gradient_config(o.seed) : synth::uniform_config(o.seed, o.try_prob);
        config.n_teams = o.teams;
        if (o.teams > 0) config.team_style.assign(static_cast<std::size_t>(o.teams), config.team_style.front());
    }
    config.n_matches_per_team = o.matches;
    config.possessions_per_match = o.possessions;
    const auto season = synth::generate_season(config, o.gamma);
    write_file(o.events, [&](std::ostream& f) { write_events(f, season.events); });
    if (!o.truth.empty()) write_file(o.truth, [&](std::ostream& f) { synth::write_truth_json(f, season.truth); });
    out << "rows " << season.events.size() << ", possessions " << season.truth.possession_count << '\n';
    return 0;
}

int cmd_system(const Options& o, std::ostream& out) {
    const auto system = ZoneSystem::from_grid(build_grid(o.cell));
    write_file(o.out, [&](std::ostream& f) { write_system_json(f, system); });
    out << "zones " << system.zone_count() << '\n';
    return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Expected possession value models for rugby league event data", "epv"};
    app.require_subcommand(1);
    Options o;

    auto* ingest = app.add_subcommand("ingest", "Validate an events CSV and write the play store");
    ingest->add_option("--events", o.events, "Events CSV")->required();
    ingest->add_option("--orient", o.orient, "Coordinate frame of the feed")
        ->check(CLI::IsMember({"attacking-frame", "raw"}));
    ingest->add_option("--out", o.out, "Play store to write")->required();

    auto* epv = app.add_subcommand("epv", "Estimate EPV on a zone system");
    epv->add_option("--plays", o.plays, "Play store")->required();
    epv->add_option("--grid", o.grid, "5, 10, or 'agg FILE'")->expected(1, 2);
    epv->add_option("--gamma", o.gamma, "Discount per play");
    epv->add_option("--out", o.out, "Model JSON to write")->required();

    auto* aggregate = app.add_subcommand("aggregate", "Build the aggregated zone system");
    aggregate->add_option("--plays", o.plays, "Play store")->required();
    aggregate->add_option("--threshold", o.threshold, "Smallest effect of interest, in match-return units");
    aggregate->add_option("--alpha", o.alpha, "Significance level");
    aggregate->add_option("--gamma", o.gamma, "Discount per play");
    aggregate->add_flag("--no-fold", o.no_fold, "Keep left and right columns separate");
    aggregate->add_option("--min-share", o.min_share, "Play share below which a row group spans the full width");
    aggregate->add_option("--full-width", o.force_full, "Row groups always emitted full width");
    aggregate->add_option("--split", o.never_full, "Row groups never emitted full width");
    aggregate->add_option("--out", o.out, "System JSON to write")->required();

    auto* repro = app.add_subcommand("repro", "Reproducibility of reward distributions");
    repro->add_option("--plays", o.plays, "Play store")->required();
    repro->add_option("--system", o.system_file, "System or model JSON")->required();
    repro->add_option("--k", o.k, "Window length N or range A..B");
    repro->add_option("--gamma", o.gamma, "Discount per play");
    repro->add_option("--out", o.out, "Comparison CSV to write")->required();
    repro->add_option("--summary", o.summary, "Per-k summary CSV");
    repro->add_option("--json", o.json, "Full report as JSON");

    auto* zscore = app.add_subcommand("zscore", "Team dependence profiles");
    zscore->add_option("--plays", o.plays, "Play store")->required();
    zscore->add_option("--system", o.system_file, "System or model JSON")->required();
    zscore->add_option("--gamma", o.gamma, "Discount per play");
    zscore->add_option("--out", o.out, "Z-score CSV to write")->required();
    zscore->add_option("--json", o.json, "Profile as JSON");
    zscore->add_option("--heatmap", o.heatmap, "SVG with one pitch per team");

    auto* heatmap = app.add_subcommand("heatmap", "Draw a model as an SVG heatmap");
    heatmap->add_option("--model", o.model, "Model JSON")->required();
    heatmap->add_option("--out", o.out, "SVG to write")->required();
    heatmap->add_option("--title", o.title, "Panel title");

    auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic season");
    synth_cmd->add_option("--seed", o.seed, "Random seed");
    synth_cmd->add_option("--preset", o.preset, "Season layout")->check(CLI::IsMember({"regime", "gradient", "uniform"}));
    synth_cmd->add_option("--row-regimes", o.row_regimes, "True row regimes (regime preset)")->check(CLI::Range(1, 11));
    synth_cmd->add_option("--column-regimes", o.column_regimes, "True column regimes (regime preset)")
        ->check(CLI::Range(1, 7));
    synth_cmd->add_option("--teams", o.teams, "Number of teams (even)");
    synth_cmd->add_option("--matches", o.matches, "Matches per team");
    synth_cmd->add_option("--possessions", o.possessions, "Possessions per team per match");
    synth_cmd->add_option("--try-prob", o.try_prob, "Try probability (uniform preset)");
    synth_cmd->add_option("--gamma", o.gamma, "Discount used for the analytic values");
    synth_cmd->add_option("--events", o.events, "Events CSV to write")->required();
    synth_cmd->add_option("--truth", o.truth, "Ground-truth JSON to write");

    auto* system_cmd = app.add_subcommand("system", "Export a fixed grid as system JSON");
    system_cmd->add_option("--grid", o.cell, "Cell size in metres (5 or 10)");
    system_cmd->add_option("--out", o.out, "System JSON to write")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*ingest) return cmd_ingest(o, out);
        if (*epv) return cmd_epv(o, out);
        if (*aggregate) return cmd_aggregate(o, out);
        if (*repro) return cmd_repro(o, out, err);
        if (*zscore) return cmd_zscore(o, out);
        if (*heatmap) return cmd_heatmap(o, out);
        if (*synth_cmd) return cmd_synth(o, out);
        if (*system_cmd) return cmd_system(o, out);
    } catch (const Error& e) {
        err << "epv: " << e.what() << '\n';
        return e.kind() == ErrorKind::input ? 2 : 1;
    } catch (const std::exception& e) {
        err << "epv: " << e.what() << '\n';
        return 2;
    }
    return 2;
}

}  // namespace epv
