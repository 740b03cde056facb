#ifndef FAIRLENS_PIPELINE_HPP_
#define FAIRLENS_PIPELINE_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "fairlens/report.hpp"
#include "fairlens/triage.hpp"

namespace fairlens {

// Single JSON configuration document for the whole pipeline. Input is either
// a CSV log plus column map or an inline/referenced simulator scenario.
struct PipelineConfig {
    std::optional<std::string> log_path;
    LoadOptions load;
    std::optional<Scenario> scenario;

    double tau = 0.8;
    std::size_t min_group_n = 30;
    std::int64_t gap_threshold_minutes = 30;
    AgeBands age_bands;
    VitalThresholds vitals; // forwarded to the scenario when simulating
    VConvention v_convention = VConvention::TableBands;
    std::vector<SensitiveAttribute> interactional_attributes = {SensitiveAttribute::Language};

    std::string out_dir = "out";
    ReportFormat report_format = ReportFormat::Markdown;
    std::uint64_t seed = 0;
};

PipelineConfig pipeline_config_from_json_text(const std::string& text);
PipelineConfig pipeline_config_from_file(const std::string& path);

struct PipelineArtifacts {
    std::string outcomes_csv;
    std::string results_csv;
    std::string results_json;
    std::string report_path;
    std::string net_json;
};

// load -> impute -> map -> filter -> discover -> replay -> extract -> test ->
// justice -> render. Writes the artifact set into out_dir and prints one
// summary line per justice dimension to `status`. Deterministic for a fixed
// config and seed. Throws ConfigError / InputError on failure.
PipelineArtifacts run_pipeline(const PipelineConfig& config, std::ostream& status);

} // namespace fairlens

#endif
