#include "epv/serialize.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "epv/errors.hpp"

namespace epv {

namespace {

using Json = nlohmann::ordered_json;

Json bounds_json(const std::vector<Rect>& rects) {
    Json out = Json::array();
    for (const auto& r : rects) out.push_back({r.x0, r.x1, r.y0, r.y1});
    return out;
}

std::vector<Rect> bounds_from(const Json& j) {
    std::vector<Rect> out;
    for (const auto& r : j) {
        if (!r.is_array() || r.size() != 4) throw ParseError("zone bounds must be [x0, x1, y0, y1]");
        out.push_back(Rect{r[0].get<double>(), r[1].get<double>(), r[2].get<double>(), r[3].get<double>()});
    }
    return out;
}

Json compact_system(const ZoneSystem& system) {
    if (system.is_grid()) return {{"kind", "grid"}, {"cell_m", system.base().cell_length_m()}};
    Json members = Json::array();
    for (int z = 1; z <= system.zone_count(); ++z) members.push_back(system.members(ZoneId{z}));
    return {{"kind", "partition"},
            {"base_cell_m", system.base().cell_length_m()},
            {"label", system.label()},
            {"members", std::move(members)}};
}

ZoneSystem partition_system(double base_cell, std::vector<std::vector<int>> members) {
    auto label = partition_label(members);
    return ZoneSystem::from_partition(build_grid(base_cell), std::move(members), std::move(label));
}

ZoneSystem system_from_json(const Json& j) {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "grid") return ZoneSystem::from_grid(build_grid(j.at("cell_m").get<double>()));
    if (kind == "partition" && j.contains("members")) {
        return partition_system(j.at("base_cell_m").get<double>(), j.at("members").get<std::vector<std::vector<int>>>());
    }
    if (kind == "partition" || kind == "aggregated") {
        std::vector<std::vector<int>> members;
        for (const auto& z : j.at("zones")) members.push_back(z.at("members").get<std::vector<int>>());
        return partition_system(j.at("base_cell_m").get<double>(), std::move(members));
    }
    if (kind == "epv_model") return system_from_json(j.at("system"));
    throw ParseError("unknown document kind '" + kind + "'");
}

Json parse(std::istream& in) {
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
}

template <class F>
auto guarded(F&& f) {
    try {
        return f();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed document: ") + e.what());
    }
}

std::ifstream open(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ParseError("cannot open " + file.string());
    return in;
}

Json number_or_null(double v) {
    if (std::isinf(v)) return nullptr;
    return v;
}

}  // namespace

std::string format_number(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void write_system_json(std::ostream& out, const ZoneSystem& system) {
    Json j;
    if (system.is_grid()) {
        j["kind"] = "grid";
        j["cell_m"] = system.base().cell_length_m();
    } else {
        j["kind"] = "partition";
        j["base_cell_m"] = system.base().cell_length_m();
    }
    j["label"] = system.label();
    j["zone_count"] = system.zone_count();
    Json zones = Json::array();
    for (int z = 1; z <= system.zone_count(); ++z) {
        Json zone{{"id", z}};
        if (!system.is_grid()) zone["members"] = system.members(ZoneId{z});
        zone["bounds"] = bounds_json(system.bounds(ZoneId{z}));
        zones.push_back(std::move(zone));
    }
    j["zones"] = std::move(zones);
    out << j.dump(1) << '\n';
}

void write_aggregated_json(std::ostream& out, const AggregatedZoneSystem& agg) {
    const ZoneSystem system = agg.zone_system();
    Json j;
    j["kind"] = "aggregated";
    j["base_cell_m"] = system.base().cell_length_m();
    j["label"] = system.label();
    j["folded"] = agg.folded;
    j["column_units"] = agg.column_units;
    j["row_units"] = agg.row_units;
    j["column_groups"] = agg.column_groups.groups;
    j["row_groups"] = agg.row_groups.groups;
    j["full_width_rows"] = agg.full_width_rows;
    j["zone_count"] = system.zone_count();
    Json zones = Json::array();
    for (const auto& z : agg.zones) {
        zones.push_back({{"id", z.id},
                         {"members", z.members},
                         {"full_width", z.full_width},
                         {"row_group", z.row_group},
                         {"column_group", z.column_group},
                         {"bounds", bounds_json(system.bounds(ZoneId{z.id}))}});
    }
    j["zones"] = std::move(zones);
    out << j.dump(1) << '\n';
}

ZoneSystem read_zone_system(std::istream& in) {
    const Json j = parse(in);
    return guarded([&] { return system_from_json(j); });
}

ZoneSystem read_zone_system(const std::filesystem::path& file) {
    auto in = open(file);
    return read_zone_system(in);
}

void write_model_json(std::ostream& out, const EPVModel& model) {
    Json j;
    j["kind"] = "epv_model";
    j["label"] = model.system.label();
    j["gamma"] = model.gamma;
    j["system"] = compact_system(model.system);
    Json zones = Json::array();
    for (int z = 1; z <= model.zone_count(); ++z) {
        const auto zi = static_cast<std::size_t>(z - 1);
        Json zone{{"id", z}, {"bounds", bounds_json(model.system.bounds(ZoneId{z}))}};
        if (model.values[zi]) {
            zone["epv"] = *model.values[zi];
        } else {
            zone["epv"] = nullptr;
        }
        zone["visits"] = model.visits[zi];
        zones.push_back(std::move(zone));
    }
    j["zones"] = std::move(zones);
    out << j.dump(1) << '\n';
}

EPVModel read_model_json(std::istream& in) {
    const Json j = parse(in);
    return guarded([&] {
        if (j.value("kind", "") != "epv_model") throw ParseError("not a model document");
        ZoneSystem system = system_from_json(j.at("system"));
        const auto& zones = j.at("zones");
        if (zones.size() != static_cast<std::size_t>(system.zone_count())) {
            throw ParseError("model zone count does not match its system");
        }
        const auto n = zones.size();
        EPVModel model{std::move(system), j.at("gamma").get<double>(), std::vector<std::optional<double>>(n),
                       std::vector<long long>(n, 0)};
        for (const auto& z : zones) {
            const int id = z.at("id").get<int>();
            if (id < 1 || static_cast<std::size_t>(id) > n) throw ParseError("model zone id out of range");
            const auto zi = static_cast<std::size_t>(id - 1);
            if (!z.at("epv").is_null()) model.values[zi] = z.at("epv").get<double>();
            model.visits[zi] = z.at("visits").get<long long>();
        }
        return model;
    });
}

EPVModel read_model_json(const std::filesystem::path& file) {
    auto in = open(file);
    return read_model_json(in);
}

ModelDocument read_model_document(std::istream& in) {
    const Json j = parse(in);
    return guarded([&] {
        ModelDocument doc;
        doc.label = j.value("label", "");
        doc.gamma = j.value("gamma", 1.0);
        if (!j.contains("zones")) throw MissingGeometry("model document lists no zones");
        for (const auto& z : j.at("zones")) {
            ModelZone mz;
            mz.id = z.at("id").get<int>();
            if (!z.contains("bounds") || !z.at("bounds").is_array() || z.at("bounds").empty()) {
                throw MissingGeometry("zone " + std::to_string(mz.id) + " has no bounds");
            }
            mz.bounds = bounds_from(z.at("bounds"));
            if (z.contains("epv") && !z.at("epv").is_null()) mz.epv = z.at("epv").get<double>();
            mz.visits = z.value("visits", 0LL);
            doc.zones.push_back(std::move(mz));
        }
        return doc;
    });
}

void write_repro_csv(std::ostream& out, const ReproStudy& study) {
    out << "team,k,target_match,kl,is_infinite\n";
    for (const auto& r : study.reports) {
        for (const auto& c : r.comparisons) {
            out << r.team_id << ',' << r.k << ',' << c.target_match << ',' << format_number(c.kl) << ','
                << (c.is_infinite() ? "true" : "false") << '\n';
        }
    }
}

void write_repro_summary_csv(std::ostream& out, const ReproStudy& study) {
    out << "k,teams,mean_pct,sd_pct\n";
    for (const auto& s : study.summary) {
        out << s.k << ',' << s.teams << ',' << format_number(s.mean_pct) << ',' << format_number(s.sd_pct) << '\n';
    }
}

void write_repro_json(std::ostream& out, const ReproStudy& study) {
    Json j;
    Json reports = Json::array();
    for (const auto& r : study.reports) {
        Json comps = Json::array();
        for (const auto& c : r.comparisons) {
            comps.push_back({{"target_match", c.target_match},
                             {"window", c.window},
                             {"kl", number_or_null(c.kl)},
                             {"is_infinite", c.is_infinite()}});
        }
        reports.push_back(
            {{"team", r.team_id}, {"k", r.k}, {"pct_non_infinity", r.pct_non_infinity}, {"comparisons", comps}});
    }
    Json summary = Json::array();
    for (const auto& s : study.summary) {
        summary.push_back({{"k", s.k}, {"teams", s.teams}, {"mean_pct", s.mean_pct}, {"sd_pct", s.sd_pct}});
    }
    j["summary"] = std::move(summary);
    j["reports"] = std::move(reports);
    j["excluded_matches"] = study.excluded_matches;
    j["warnings"] = study.warnings;
    out << j.dump(1) << '\n';
}

void write_zscore_csv(std::ostream& out, const ZScoreProfile& profile) {
    out << "team,zone,z\n";
    for (std::size_t t = 0; t < profile.teams.size(); ++t) {
        for (std::size_t z = 0; z < profile.z.size(); ++z) {
            out << profile.teams[t] << ',' << z + 1 << ',' << format_number(profile.z[z][t]) << '\n';
        }
    }
}

void write_zscore_json(std::ostream& out, const ZScoreProfile& profile) {
    Json j;
    j["system"] = profile.system_label;
    j["teams"] = profile.teams;
    Json zones = Json::array();
    for (std::size_t z = 0; z < profile.z.size(); ++z) {
        zones.push_back({{"zone", z + 1}, {"flat", static_cast<bool>(profile.flat[z])}, {"z", profile.z[z]}});
    }
    j["zones"] = std::move(zones);
    out << j.dump(1) << '\n';
}

}  // namespace epv
