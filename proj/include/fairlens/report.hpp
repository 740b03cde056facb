#ifndef FAIRLENS_REPORT_HPP_
#define FAIRLENS_REPORT_HPP_

#include <set>
#include <string>
#include <vector>

#include "fairlens/stats.hpp"

namespace fairlens {

enum class Justice { Distributive, Procedural, Interactional };

std::string_view to_string(Justice j);

// Fixed outcome -> justice mapping: Decision is distributive; Time,
// Deviation, and Re-do are procedural; Re-do additionally interactional
// (restricted to the interaction-related attributes, Language by default).
std::vector<Justice> justice_dimensions_of(OutcomeKind outcome);

struct JusticeEntry {
    Justice justice = Justice::Distributive;
    OutcomeKind outcome = OutcomeKind::Decision;
    std::set<int> acuity_levels;
    std::vector<SensitiveAttribute> key_attributes;
    Interpretation effect_min = Interpretation::Negligible;
    Interpretation effect_max = Interpretation::Negligible;
};

struct JusticeSummary {
    std::vector<JusticeEntry> entries; // cells with no qualifying results omitted
};

struct JusticeOptions {
    // A result qualifies when tested, significant, and above the weakest band
    // of its effect scale: Small for epsilon-squared, Medium for Cramer's V
    // under the table bands (whose weakest band is Small).
    Interpretation epsilon_floor = Interpretation::Small;
    Interpretation v_floor = Interpretation::Medium;
    std::vector<SensitiveAttribute> interactional_attributes = {SensitiveAttribute::Language};
};

JusticeSummary map_to_justice(const std::vector<StatTestResult>& results, const JusticeOptions& options = {});

enum class ReportFormat { Markdown, Json, Csv };

struct RenderOptions {
    VConvention v_convention = VConvention::TableBands; // primary labels
};

// Deterministic serialization of the full result grid plus the justice
// summary. Markdown mirrors the per-acuity result tables; JSON is the machine
// interface; CSV has one row per grid cell under a fixed header.
std::string render_report(const std::vector<StatTestResult>& results, const JusticeSummary& summary,
                          ReportFormat format, const RenderOptions& options = {});

ReportFormat report_format_from_string(const std::string& name); // throws ConfigError on unknown names

// Machine-interface round trip: results_from_json(render_report(..., Json))
// reproduces the result values exactly.
std::vector<StatTestResult> results_from_json(const std::string& text);

} // namespace fairlens

#endif
