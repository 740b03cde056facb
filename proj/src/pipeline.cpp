#include "fairlens/pipeline.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "fairlens/errors.hpp"

namespace fairlens {

namespace {

using nlohmann::json;

void parse_column_map(const json& jm, ColumnMap& cm) {
    // The three core columns are required; attribute columns fall back to
    // their canonical names and may be absent from the source header.
    for (const char* key : {"case_id", "activity", "timestamp"})
        if (!jm.contains(key)) throw ConfigError(std::string("input.column_map.") + key + ": required key missing");
    cm.case_id = jm["case_id"].get<std::string>();
    cm.activity = jm["activity"].get<std::string>();
    cm.timestamp = jm["timestamp"].get<std::string>();
    cm.race = jm.value("race", cm.race);
    cm.age = jm.value("age", cm.age);
    cm.gender = jm.value("gender", cm.gender);
    cm.insurance = jm.value("insurance", cm.insurance);
    cm.language = jm.value("language", cm.language);
    cm.acuity = jm.value("acuity", cm.acuity);
    cm.disposition = jm.value("disposition", cm.disposition);
}

} // namespace

PipelineConfig pipeline_config_from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    PipelineConfig cfg;

    const bool has_input = j.contains("input") && j["input"].contains("log");
    const bool has_scenario = j.contains("scenario");
    if (!has_input && !has_scenario) throw ConfigError("input.log or scenario: one of them is required");
    if (has_input && has_scenario) throw ConfigError("input.log and scenario: mutually exclusive");

    if (has_input) {
        const auto& ji = j["input"];
        cfg.log_path = ji["log"].get<std::string>();
        if (ji.contains("delimiter")) {
            const auto d = ji["delimiter"].get<std::string>();
            if (d.size() != 1) throw ConfigError("input.delimiter: must be a single character");
            cfg.load.delimiter = d[0];
        }
        if (ji.contains("timestamp_format")) cfg.load.timestamp_format = ji["timestamp_format"].get<std::string>();
        if (!ji.contains("column_map")) throw ConfigError("input.column_map: required key missing");
        parse_column_map(ji["column_map"], cfg.load.columns);
    } else {
        cfg.scenario = j["scenario"].is_string() ? scenario_from_json_file(j["scenario"].get<std::string>())
                                                 : scenario_from_json_text(j["scenario"].dump());
    }

    if (j.contains("thresholds")) {
        const auto& t = j["thresholds"];
        cfg.tau = t.value("tau", cfg.tau);
        if (cfg.tau < 0 || cfg.tau > 1) throw ConfigError("thresholds.tau: must be in [0,1]");
        if (t.contains("min_group_n")) {
            const auto n = t["min_group_n"].get<std::int64_t>();
            if (n < 1) throw ConfigError("thresholds.min_group_n: must be >= 1");
            cfg.min_group_n = static_cast<std::size_t>(n);
        }
        cfg.gap_threshold_minutes = t.value("gap_threshold_minutes", cfg.gap_threshold_minutes);
        if (cfg.gap_threshold_minutes < 0) throw ConfigError("thresholds.gap_threshold_minutes: must be >= 0");
        if (t.contains("age_bands")) {
            cfg.age_bands.until45_max = t["age_bands"].value("until45_max", cfg.age_bands.until45_max);
            cfg.age_bands.until65_max = t["age_bands"].value("until65_max", cfg.age_bands.until65_max);
            if (cfg.age_bands.until45_max >= cfg.age_bands.until65_max)
                throw ConfigError("thresholds.age_bands: until45_max must be below until65_max");
        }
        if (t.contains("vitals")) {
            const auto& v = t["vitals"];
            cfg.vitals.heart_rate_max = v.value("heart_rate_max", cfg.vitals.heart_rate_max);
            cfg.vitals.respiratory_rate_max = v.value("respiratory_rate_max", cfg.vitals.respiratory_rate_max);
            cfg.vitals.spo2_min = v.value("spo2_min", cfg.vitals.spo2_min);
            if (cfg.scenario) cfg.scenario->thresholds = cfg.vitals;
        }
        if (t.contains("cramers_v_convention")) {
            const auto conv = t["cramers_v_convention"].get<std::string>();
            if (conv == "table")
                cfg.v_convention = VConvention::TableBands;
            else if (conv == "prose")
                cfg.v_convention = VConvention::ProseAnchors;
            else
                throw ConfigError("thresholds.cramers_v_convention: expected 'table' or 'prose'");
        }
    }
    if (j.contains("justice") && j["justice"].contains("interactional_attributes")) {
        cfg.interactional_attributes.clear();
        for (const auto& name : j["justice"]["interactional_attributes"]) {
            const auto attr = attribute_from_string(name.get<std::string>());
            if (!attr)
                throw ConfigError("justice.interactional_attributes: unknown attribute '" +
                                  name.get<std::string>() + "'");
            cfg.interactional_attributes.push_back(*attr);
        }
    }
    if (j.contains("output")) {
        const auto& o = j["output"];
        cfg.out_dir = o.value("dir", cfg.out_dir);
        if (o.contains("format")) cfg.report_format = report_format_from_string(o["format"].get<std::string>());
    }
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    return cfg;
}

PipelineConfig pipeline_config_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return pipeline_config_from_json_text(ss.str());
}

namespace {

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write '" + path + "'");
    out << text;
}

} // namespace

PipelineArtifacts run_pipeline(const PipelineConfig& config, std::ostream& status) {
    EventLog log = config.scenario ? generate_log(*config.scenario, config.seed)
                                   : load_log_file(*config.log_path, config.load);
    status << "loaded " << log.provenance.row_count << " events in " << log.provenance.case_count << " cases ("
           << log.provenance.rejected_rows << " rows rejected)\n";

    log = impute_case_attributes(std::move(log));
    log = map_log_demographics(std::move(log), config.age_bands);
    log = filter_for_analysis(std::move(log));
    status << "analysis set: " << log.provenance.case_count << " cases (" << log.provenance.removed_cases
           << " removed, " << log.provenance.attribute_conflicts << " attribute conflicts, "
           << log.provenance.unmapped_categories << " unmapped categories)\n";
    if (log.cases.empty()) throw InputError("no cases left after filtering");

    const DirectlyFollows df = count_directly_follows(log);
    const DependencyGraph graph = mine_dependency_graph(df, config.tau);
    const ProcessNet net = to_process_net(graph);

    const auto outcomes = extract_outcomes(log, net, {config.gap_threshold_minutes});

    TestOptions test_options;
    test_options.min_group_n = config.min_group_n;
    test_options.v_convention = config.v_convention;
    const auto results = run_attribute_tests(outcomes, test_options);

    JusticeOptions justice_options;
    justice_options.interactional_attributes = config.interactional_attributes;
    if (config.v_convention == VConvention::ProseAnchors) justice_options.v_floor = Interpretation::Small;
    const JusticeSummary summary = map_to_justice(results, justice_options);

    RenderOptions render_options;
    render_options.v_convention = config.v_convention;

    namespace fs = std::filesystem;
    fs::create_directories(config.out_dir);
    PipelineArtifacts artifacts;
    artifacts.outcomes_csv = (fs::path(config.out_dir) / "outcomes.csv").string();
    artifacts.results_csv = (fs::path(config.out_dir) / "results.csv").string();
    artifacts.results_json = (fs::path(config.out_dir) / "results.json").string();
    artifacts.net_json = (fs::path(config.out_dir) / "net.json").string();
    const char* report_ext = config.report_format == ReportFormat::Markdown
                                 ? "report.md"
                                 : (config.report_format == ReportFormat::Json ? "report.json" : "report.csv");
    artifacts.report_path = (fs::path(config.out_dir) / report_ext).string();

    {
        std::ofstream out(artifacts.outcomes_csv, std::ios::binary);
        if (!out) throw InputError("cannot write '" + artifacts.outcomes_csv + "'");
        write_outcomes_csv(out, outcomes);
    }
    write_text_file(artifacts.results_csv, render_report(results, summary, ReportFormat::Csv, render_options));
    write_text_file(artifacts.results_json, render_report(results, summary, ReportFormat::Json, render_options));
    write_text_file(artifacts.net_json, net_to_json(net));
    write_text_file(artifacts.report_path, render_report(results, summary, config.report_format, render_options));

    // One line per justice dimension.
    constexpr Justice kJustices[] = {Justice::Distributive, Justice::Procedural, Justice::Interactional};
    for (const auto justice : kJustices) {
        status << to_string(justice) << ": ";
        bool any = false;
        for (const auto& e : summary.entries) {
            if (e.justice != justice) continue;
            if (any) status << "; ";
            status << to_string(e.outcome) << " [";
            bool first = true;
            for (const int a : e.acuity_levels) {
                if (!first) status << ",";
                status << a;
                first = false;
            }
            status << "] ";
            first = true;
            for (const auto attr : e.key_attributes) {
                if (!first) status << "/";
                status << to_string(attr);
                first = false;
            }
            status << " " << to_string(e.effect_min);
            if (e.effect_max != e.effect_min) status << "-" << to_string(e.effect_max);
            any = true;
        }
        if (!any) status << "no disparities above the effect floor";
        status << "\n";
    }
    return artifacts;
}

} // namespace fairlens
