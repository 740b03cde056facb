#ifndef FAIRLENS_EVENTLOG_HPP_
#define FAIRLENS_EVENTLOG_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fairlens/demographics.hpp"

namespace fairlens {

// Closed MIMICEL activity vocabulary.
inline constexpr std::string_view kEnterEd = "Enter the ED";
inline constexpr std::string_view kTriage = "Triage in the ED";
inline constexpr std::string_view kVitalSign = "Vital sign check";
inline constexpr std::string_view kMedDispense = "Medicine dispensations";
inline constexpr std::string_view kMedReconcile = "Medicine reconciliation";
inline constexpr std::string_view kDischarge = "Discharge from the ED";

struct Event {
    std::string case_id;
    std::string activity;
    std::int64_t timestamp = 0; // unix seconds
    // Event-level attributes (acuity at triage, demographics on the row that
    // carried them, unmapped source columns). Only non-empty values stored.
    std::vector<std::pair<std::string, std::string>> extra;

    const std::string* find_extra(std::string_view key) const;
    void set_extra(std::string_view key, std::string_view value);

    bool operator==(const Event&) const = default;
};

struct Case {
    std::string case_id;
    std::vector<Event> events; // ascending by timestamp, ties in file order
    std::optional<DemographicProfile> profile;

    bool operator==(const Case&) const = default;
};

struct Provenance {
    std::string source;
    std::size_t row_count = 0;
    std::size_t case_count = 0;
    std::size_t rejected_rows = 0;        // unparseable timestamp / empty case id
    std::size_t attribute_conflicts = 0;  // imputation found distinct values
    std::size_t unmapped_categories = 0;  // raw values outside the lookup tables
    std::size_t invalid_profiles = 0;     // cases whose raw record failed validation
    std::size_t removed_cases = 0;        // dropped by filter_for_analysis
};

struct EventLog {
    std::vector<Case> cases;
    // Non-core column order as seen in the source header; drives CSV output.
    std::vector<std::string> extra_columns;
    Provenance provenance;

    std::size_t event_count() const;
};

// Source column names for the core and attribute fields. Attribute entries
// left empty are treated as absent from the source.
struct ColumnMap {
    std::string case_id = "case_id";
    std::string activity = "activity";
    std::string timestamp = "timestamp";
    std::string race = "race";
    std::string age = "age";
    std::string gender = "gender";
    std::string insurance = "insurance";
    std::string language = "language";
    std::string acuity = "acuity";
    std::string disposition = "disposition";
};

struct LoadOptions {
    ColumnMap columns;
    char delimiter = ',';
    std::string timestamp_format = "%Y-%m-%d %H:%M:%S";
    std::string source_name = "<stream>";
};

// Attribute keys demographic values are stored under in Event::extra after
// column normalization.
inline constexpr std::string_view kAttrRace = "race";
inline constexpr std::string_view kAttrAge = "age";
inline constexpr std::string_view kAttrGender = "gender";
inline constexpr std::string_view kAttrInsurance = "insurance";
inline constexpr std::string_view kAttrLanguage = "language";
inline constexpr std::string_view kAttrAcuity = "acuity";
inline constexpr std::string_view kAttrDisposition = "disposition";

// Reads a CSV event stream into a per-case, time-sorted log. Rows with an
// unparseable timestamp or empty case id are dropped and counted in
// provenance. Throws ConfigError when a mapped column is missing from the
// header and InputError when no valid rows remain.
EventLog load_log(std::istream& in, const LoadOptions& options = {});
EventLog load_log_file(const std::string& path, LoadOptions options = {});

// Writes the log back to the standard CSV schema (case_id, activity,
// timestamp, then extra_columns in order). load(write(log)) == log.
void write_log(std::ostream& out, const EventLog& log, const std::string& timestamp_format = "%Y-%m-%d %H:%M:%S", char delimiter = ',');
void write_log_file(const std::string& path, const EventLog& log, const std::string& timestamp_format = "%Y-%m-%d %H:%M:%S", char delimiter = ',');

// Case-wide attribute propagation: an attribute missing on some events but
// carried (with one distinct value) by others is copied to every event of the
// case. Distinct values keep the earliest and bump the conflict counter.
// Acuity is deliberately left per-event; repeated triage needs it intact.
EventLog impute_case_attributes(EventLog log);

// Resolves each case's DemographicProfile from its imputed attributes. Cases
// whose raw record fails validation (bad age) are dropped and counted.
EventLog map_log_demographics(EventLog log, const AgeBands& bands = {});

// Removes cases whose race group is Deleted; Unknown/Other groups stay.
EventLog filter_for_analysis(EventLog log);

} // namespace fairlens

#endif
