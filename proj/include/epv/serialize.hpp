#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "epv/aggregation.hpp"
#include "epv/analysis.hpp"
#include "epv/pitch.hpp"
#include "epv/valuation.hpp"

namespace epv {

// File formats shared by the command-line tool.
//
// System JSON, fixed grid:
//   {"kind":"grid","cell_m":5,"label":"grid5","zone_count":308,
//    "zones":[{"id":1,"bounds":[[x0,x1,y0,y1]]}, ...]}
// System JSON, aggregated:
//   {"kind":"aggregated","base_cell_m":5,"label":...,"folded":true,
//    "column_units":[[1,14],...],"row_units":[[1,2],...],
//    "column_groups":[[1],[2],...],"row_groups":[[1,2],...],"full_width_rows":[1],
//    "zone_count":19,"zones":[{"id","members","full_width","row_group","column_group","bounds"}]}
// Model JSON:
//   {"kind":"epv_model","gamma":1.0,"system":{...compact system...},
//    "zones":[{"id":1,"bounds":[[...]],"epv":0.42 or null,"visits":17}, ...]}
// where the compact system is {"kind":"grid","cell_m":5} or
// {"kind":"partition","base_cell_m":5,"label":...,"members":[[...],...]}.

void write_system_json(std::ostream& out, const ZoneSystem& system);
void write_aggregated_json(std::ostream& out, const AggregatedZoneSystem& system);

/// Accepts any of the system documents above, or a model document (its
/// embedded system is used).
ZoneSystem read_zone_system(std::istream& in);
ZoneSystem read_zone_system(const std::filesystem::path& file);

void write_model_json(std::ostream& out, const EPVModel& model);
EPVModel read_model_json(std::istream& in);
EPVModel read_model_json(const std::filesystem::path& file);

/// Zone geometry and value as stored in a model document, without rebuilding
/// the zone system. Used for plotting.
struct ModelZone {
    int id = 0;
    std::vector<Rect> bounds;
    std::optional<double> epv;
    long long visits = 0;
};

struct ModelDocument {
    std::string label;
    double gamma = 1.0;
    std::vector<ModelZone> zones;
};

/// Throws MissingGeometry when a zone carries no bounds.
ModelDocument read_model_document(std::istream& in);

/// Shortest decimal text that reads back to the same double; "inf" for
/// infinity.
std::string format_number(double v);

void write_repro_csv(std::ostream& out, const ReproStudy& study);          // team,k,target_match,kl,is_infinite
void write_repro_summary_csv(std::ostream& out, const ReproStudy& study);  // k,teams,mean_pct,sd_pct
void write_repro_json(std::ostream& out, const ReproStudy& study);

void write_zscore_csv(std::ostream& out, const ZScoreProfile& profile);  // team,zone,z
void write_zscore_json(std::ostream& out, const ZScoreProfile& profile);

}  // namespace epv
