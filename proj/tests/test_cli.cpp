#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include <json.hpp>

#include "epv/cli.hpp"
#include "epv/errors.hpp"
#include "epv/heatmap.hpp"
#include "epv/serialize.hpp"
#include "epv/synth.hpp"
#include "epv/valuation.hpp"

namespace fs = std::filesystem;
using namespace epv;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "epv");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void spit(const fs::path& p, const std::string& text) {
    std::ofstream(p, std::ios::binary) << text;
}

struct Scratch {
    fs::path dir;
    Scratch() : dir(fs::temp_directory_path() / ("epv-cli-" + std::to_string(::getpid()))) {
        fs::create_directories(dir);
    }
    ~Scratch() { fs::remove_all(dir); }
    std::string operator/(const std::string& name) const { return (dir / name).string(); }
};

const Scratch& scratch() {
    static const Scratch s;
    return s;
}

// A small season written once and shared by the tests below.
const std::string& small_plays() {
    static const std::string path = [] {
        const auto& s = scratch();
        REQUIRE(run({"synth", "--seed", "5", "--matches", "6", "--events", s / "ev.csv", "--truth", s / "truth.json"})
                    .code == 0);
        REQUIRE(run({"ingest", "--events", s / "ev.csv", "--out", s / "plays.csv"}).code == 0);
        return s / "plays.csv";
    }();
    return path;
}

std::vector<Possession> small_possessions() {
    return segment_matches(read_plays(fs::path(small_plays())));
}

std::map<int, std::set<std::string>> zone_fills(const std::string& svg) {
    static const std::regex rect(R"re(fill="(#[0-9a-f]{6})"[^>]*><title>zone (\d+))re");
    std::map<int, std::set<std::string>> fills;
    for (auto it = std::sregex_iterator(svg.begin(), svg.end(), rect); it != std::sregex_iterator(); ++it) {
        fills[std::stoi((*it)[2])].insert((*it)[1]);
    }
    return fills;
}

void check_round_trip(const EPVModel& model) {
    std::stringstream buf;
    write_model_json(buf, model);
    const std::string first = buf.str();
    const auto back = read_model_json(buf);
    CHECK(back.system.label() == model.system.label());
    CHECK(back.zone_count() == model.zone_count());
    CHECK(back.gamma == model.gamma);
    CHECK(back.values == model.values);  // bit-exact
    CHECK(back.visits == model.visits);
    std::stringstream again;
    write_model_json(again, back);
    CHECK(again.str() == first);
}

}  // namespace

TEST_CASE("model JSON round trips bit for bit") {
    const auto ps = small_possessions();
    check_round_trip(estimate_epv(ps, ZoneSystem::from_grid(build_grid(5)), {0.9}));
    check_round_trip(estimate_epv(ps, ZoneSystem::from_grid(build_grid(10)), {1.0}));
    const auto sys = read_zone_system(fs::path("tests/data/golden_model.json"));
    CHECK(sys.zone_count() == 19);
    check_round_trip(estimate_epv(ps, sys, {0.7}));
}

TEST_CASE("system JSON round trips") {
    for (double cell : {5.0, 10.0}) {
        const auto grid = ZoneSystem::from_grid(build_grid(cell));
        std::stringstream buf;
        write_system_json(buf, grid);
        const auto back = read_zone_system(buf);
        CHECK(back.zone_count() == grid.zone_count());
        CHECK(back.label() == grid.label());
        for (int x = 0; x <= 68; x += 3) {
            for (int y = -10; y < 100; y += 7) CHECK(back.zone_of(x, y).index == grid.zone_of(x, y).index);
        }
    }
    const auto& s = scratch();
    REQUIRE(run({"aggregate", "--plays", small_plays(), "--out", s / "agg.json"}).code == 0);
    const auto agg = read_zone_system(fs::path(s / "agg.json"));
    std::stringstream buf;
    write_system_json(buf, agg);
    const auto back = read_zone_system(buf);
    CHECK(back.label() == agg.label());
    for (int x = 0; x <= 68; x += 2) {
        for (int y = -10; y < 100; y += 3) CHECK(back.zone_of(x, y).index == agg.zone_of(x, y).index);
    }
}

TEST_CASE("numbers print in shortest round-trip form") {
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(6.0) == "6");
    CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
    const double third = 1.0 / 3.0;
    CHECK(std::stod(format_number(third)) == third);
}

TEST_CASE("models without geometry are rejected") {
    std::stringstream doc(R"({"kind":"epv_model","label":"x","gamma":1,"zones":[{"id":1,"epv":1.5,"visits":3}]})");
    CHECK_THROWS_AS(read_model_document(doc), MissingGeometry);
    const auto& s = scratch();
    spit(s / "nogeo.json", doc.str());
    const auto r = run({"heatmap", "--model", s / "nogeo.json", "--out", s / "nogeo.svg"});
    CHECK(r.code == 2);
    CHECK_FALSE(fs::exists(s / "nogeo.svg"));
}

TEST_CASE("heatmap colours") {
    const Rect left{0, 34, 0, 50}, right{34, 68, 0, 50};
    SUBCASE("constant model: every zone gets the same fill") {
        std::vector<HeatZone> zones;
        for (int i = 0; i < 8; ++i) {
            const double x0 = 8.5 * i;
            zones.push_back({i + 1, {Rect{x0, x0 + 8.5, 0, 50}}, 2.5});
        }
        const std::vector<HeatPanel> panels{{"flat", zones}};
        std::set<std::string> all;
        for (const auto& [id, f] : zone_fills(render_heatmap(panels))) all.insert(f.begin(), f.end());
        CHECK(all.size() == 1);
    }
    SUBCASE("values 0 and 6 take the ends of the scale") {
        const std::vector<HeatPanel> panels{{"two", {{1, {left}, 0.0}, {2, {right}, 6.0}}}};
        const auto fills = zone_fills(render_heatmap(panels));
        CHECK(*fills.at(1).begin() == scale_color(ColorScale::sequential, 0.0));
        CHECK(*fills.at(2).begin() == scale_color(ColorScale::sequential, 1.0));
        CHECK(scale_color(ColorScale::sequential, 0.0) == "#ffffcc");
        CHECK(scale_color(ColorScale::sequential, 1.0) == "#800026");
    }
    SUBCASE("diverging scale is white at zero") {
        CHECK(scale_color(ColorScale::diverging, 0.5) == "#f7f7f7");
        const std::vector<HeatPanel> panels{{"z", {{1, {left}, -2.0}, {2, {right}, 1.0}}}};
        HeatmapStyle style;
        style.scale = ColorScale::diverging;
        const auto fills = zone_fills(render_heatmap(panels, style));
        CHECK(*fills.at(1).begin() == scale_color(ColorScale::diverging, 0.0));
        CHECK(*fills.at(2).begin() == scale_color(ColorScale::diverging, 0.75));
    }
    SUBCASE("missing values are grey") {
        const std::vector<HeatPanel> panels{{"gap", {{1, {left}, std::nullopt}, {2, {right}, 1.0}}}};
        CHECK(*zone_fills(render_heatmap(panels)).at(1).begin() == "#bdbdbd");
    }
}

TEST_CASE("golden heatmap") {
    const auto& s = scratch();
    const auto r = run({"heatmap", "--model", "tests/data/golden_model.json", "--out", s / "golden.svg", "--title",
                        "Aggregated EPV"});
    REQUIRE(r.code == 0);
    CHECK(slurp(s / "golden.svg") == slurp("tests/data/golden_heatmap.svg"));
}

TEST_CASE("ingest reports counts that match the generator") {
    const auto& s = scratch();
    small_plays();
    const auto r = run({"ingest", "--events", s / "ev.csv", "--out", s / "plays2.csv"});
    REQUIRE(r.code == 0);
    std::ifstream truth_in(s / "truth.json");
    const auto truth = nlohmann::json::parse(truth_in);
    const auto possessions = truth.at("possession_count").get<long long>();
    CHECK(r.out.find("possessions " + std::to_string(possessions)) != std::string::npos);
    CHECK(static_cast<long long>(small_possessions().size()) == possessions);
}

TEST_CASE("epv command: zone counts for each grid") {
    const auto& s = scratch();
    REQUIRE(run({"epv", "--plays", small_plays(), "--grid", "5", "--out", s / "m5.json"}).code == 0);
    REQUIRE(run({"epv", "--plays", small_plays(), "--grid", "10", "--out", s / "m10.json"}).code == 0);
    CHECK(read_model_json(fs::path(s / "m5.json")).zone_count() == 308);
    CHECK(read_model_json(fs::path(s / "m10.json")).zone_count() == 77);
    // a model file can stand in for a system file
    const auto r = run({"repro", "--plays", small_plays(), "--system", s / "m10.json", "--k", "2", "--out",
                        s / "r.csv"});
    CHECK(r.code == 0);
    CHECK(slurp(s / "r.csv").rfind("team,k,target_match,kl,is_infinite\n", 0) == 0);
}

TEST_CASE("exit codes") {
    const auto& s = scratch();
    SUBCASE("bad coordinate: input error with the line number") {
        spit(s / "bad.csv",
             "match_id,team_id,set_number,play_number,x,y,action,outcome\n"
             "M1,A,1,1,10,10,play,\n"
             "M1,A,1,2,99,10,play,\n");
        const auto r = run({"ingest", "--events", s / "bad.csv", "--out", s / "bad_plays.csv"});
        CHECK(r.code == 2);
        CHECK(r.err.find("line 3") != std::string::npos);
        CHECK_FALSE(fs::exists(s / "bad_plays.csv"));
    }
    SUBCASE("missing file and unknown flag") {
        CHECK(run({"ingest", "--events", s / "nope.csv", "--out", s / "x.csv"}).code == 2);
        CHECK(run({"epv", "--plays", small_plays(), "--bogus"}).code == 2);
        CHECK(run({"epv", "--plays", small_plays(), "--grid", "7", "--out", s / "x.json"}).code == 2);
        CHECK(run({"repro", "--plays", small_plays(), "--system", s / "m10.json", "--k", "0..3", "--out",
                   s / "x.csv"})
                  .code == 2);
    }
    SUBCASE("one team only: analysis error") {
        spit(s / "one.csv",
             "match_id,team_id,set_number,play_number,x,y,action,outcome\n"
             "M1,A,1,1,10,10,play,\n"
             "M1,A,1,2,12,40,try,converted\n");
        REQUIRE(run({"ingest", "--events", s / "one.csv", "--out", s / "one_plays.csv"}).code == 0);
        REQUIRE(run({"system", "--grid", "10", "--out", s / "g10.json"}).code == 0);
        const auto r = run({"zscore", "--plays", s / "one_plays.csv", "--system", s / "g10.json", "--out",
                            s / "z.csv"});
        CHECK(r.code == 1);
        CHECK(r.err.find("two teams") != std::string::npos);
    }
    SUBCASE("help is not an error") {
        CHECK(run({"--help"}).code == 0);
    }
}
