#ifndef FAIRLENS_DEMOGRAPHICS_HPP_
#define FAIRLENS_DEMOGRAPHICS_HPP_

#include <optional>
#include <string>
#include <string_view>

namespace fairlens {

enum class RaceGroup { Caucasian, NonCaucasian, Multiethnic, Other, Deleted };
enum class AgeGroup { Until45, Until65, Older };
enum class Gender { Female, Male, Unknown };
enum class InsuranceGroup { Public, Private, Unknown };
enum class LanguageGroup { English, NonEnglish, Unknown };

std::string_view to_string(RaceGroup g);
std::string_view to_string(AgeGroup g);
std::string_view to_string(Gender g);
std::string_view to_string(InsuranceGroup g);
std::string_view to_string(LanguageGroup g);

// Age banding boundaries, inclusive upper edges: [0, until45_max] -> Until45,
// (until45_max, until65_max] -> Until65, above -> Older.
struct AgeBands {
    int until45_max = 45;
    int until65_max = 65;
};

// Normalized sensitive attributes of one ED stay.
struct DemographicProfile {
    RaceGroup race_group = RaceGroup::Other;
    int age_years = 0;
    AgeGroup age_group = AgeGroup::Until45;
    Gender gender = Gender::Unknown;
    InsuranceGroup insurance_group = InsuranceGroup::Unknown;
    LanguageGroup language_group = LanguageGroup::Unknown;
    std::optional<int> acuity;       // 1..5 when present
    std::string disposition_raw;     // verbatim discharge disposition

    bool operator==(const DemographicProfile&) const = default;
};

// Raw per-case attribute strings as found in the source log.
struct RawDemographics {
    std::string race;
    std::string age;
    std::string gender;
    std::string insurance;
    std::string language;
    std::string acuity;
    std::string disposition;
};

// Counters for values that fell through to the Unknown/Other bucket.
struct MappingCounters {
    std::size_t unmapped_race = 0;
    std::size_t unmapped_language = 0;
    std::size_t unmapped_insurance = 0;
    std::size_t unmapped_gender = 0;
    std::size_t total() const { return unmapped_race + unmapped_language + unmapped_insurance + unmapped_gender; }
};

// Category lookups. Raw values are matched case-insensitively after trimming
// and collapsing hyphen runs, so "WHITE - RUSSIAN" and "WHITE -- RUSSIAN"
// resolve identically. Unlisted values return nullopt.
std::optional<RaceGroup> lookup_race(std::string_view raw);
std::optional<LanguageGroup> lookup_language(std::string_view raw);
std::optional<InsuranceGroup> lookup_insurance(std::string_view raw);
std::optional<Gender> lookup_gender(std::string_view raw);

AgeGroup band_age(int age_years, const AgeBands& bands);

// Builds a full profile from raw strings. Unrecognized categories map to the
// Unknown/Other bucket of their attribute and bump `counters` when given.
// Throws InputError for a negative or non-numeric age; a malformed acuity is
// treated as absent.
DemographicProfile map_demographics(const RawDemographics& raw, const AgeBands& bands = {}, MappingCounters* counters = nullptr);

} // namespace fairlens

#endif
