#ifndef FAIRLENS_OUTCOMES_HPP_
#define FAIRLENS_OUTCOMES_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fairlens/conformance.hpp"
#include "fairlens/eventlog.hpp"

namespace fairlens {

enum class DecisionGroup { Home, Facility, Death, AgainstAdvice, Unknown };

std::string_view to_string(DecisionGroup g);

// Discharge-disposition lookup. Unlisted strings resolve to Unknown and bump
// `unlisted` when given.
DecisionGroup decision_group(std::string_view disposition_raw, std::size_t* unlisted = nullptr);

// Re-do counts of one case, split clinical vs waste.
struct RedoBreakdown {
    std::int64_t total_redos = 0;
    std::int64_t clinical_redos = 0;
    std::int64_t waste_redos = 0;
    double waste_pct = 0; // waste_redos / total events in case

    bool operator==(const RedoBreakdown&) const = default;
};

// Seconds between the first and last event.
std::int64_t case_duration(const Case& c);

// Classifies repeated activities: entry/discharge repeats are waste; vitals
// and medicine repeats are clinical; a repeated triage is clinical only when
// its recorded acuity differs from the previous triage AND the gap exceeds
// the threshold. Repeats of activities outside the vocabulary count as
// clinical.
RedoBreakdown classify_redos(const Case& c, std::int64_t gap_threshold_minutes = 30);

// The four measured process outcomes of one case.
struct CaseOutcomes {
    std::string case_id;
    std::int64_t duration_seconds = 0;
    RedoBreakdown redo;
    double fitness = 0;
    DecisionGroup decision = DecisionGroup::Unknown;
    std::optional<int> acuity;
    DemographicProfile profile;
};

struct ExtractOptions {
    std::int64_t gap_threshold_minutes = 30;
};

// Combines duration, re-do, replay fitness, and decision group per case.
// Expects a filtered, demographics-mapped log.
std::vector<CaseOutcomes> extract_outcomes(const EventLog& log, const ProcessNet& net, const ExtractOptions& options = {});

// Flat per-case CSV, the hand-off format to the statistics stage.
void write_outcomes_csv(std::ostream& out, const std::vector<CaseOutcomes>& outcomes);

} // namespace fairlens

#endif
