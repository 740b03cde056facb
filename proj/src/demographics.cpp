#include "fairlens/demographics.hpp"

#include <cctype>
#include <unordered_map>

#include "fairlens/errors.hpp"

namespace fairlens {

std::string_view to_string(RaceGroup g) {
    switch (g) {
        case RaceGroup::Caucasian: return "Caucasian";
        case RaceGroup::NonCaucasian: return "NonCaucasian";
        case RaceGroup::Multiethnic: return "Multiethnic";
        case RaceGroup::Other: return "Other";
        case RaceGroup::Deleted: return "Deleted";
    }
    return "?";
}

std::string_view to_string(AgeGroup g) {
    switch (g) {
        case AgeGroup::Until45: return "Until45";
        case AgeGroup::Until65: return "Until65";
        case AgeGroup::Older: return "Older";
    }
    return "?";
}

std::string_view to_string(Gender g) {
    switch (g) {
        case Gender::Female: return "Female";
        case Gender::Male: return "Male";
        case Gender::Unknown: return "Unknown";
    }
    return "?";
}

std::string_view to_string(InsuranceGroup g) {
    switch (g) {
        case InsuranceGroup::Public: return "Public";
        case InsuranceGroup::Private: return "Private";
        case InsuranceGroup::Unknown: return "Unknown";
    }
    return "?";
}

std::string_view to_string(LanguageGroup g) {
    switch (g) {
        case LanguageGroup::English: return "English";
        case LanguageGroup::NonEnglish: return "NonEnglish";
        case LanguageGroup::Unknown: return "Unknown";
    }
    return "?";
}

namespace {

// Canonical key: trimmed, uppercased, hyphen runs collapsed ("--" and "-"
// both appear in the wild for the same category).
std::string canonical(std::string_view raw) {
    std::size_t b = 0, e = raw.size();
    while (b < e && std::isspace(static_cast<unsigned char>(raw[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(raw[e - 1]))) --e;
    std::string out;
    out.reserve(e - b);
    for (std::size_t i = b; i < e; ++i) {
        char c = raw[i];
        if (c == '-') {
            if (!out.empty() && out.back() == '-') continue;
            out.push_back('-');
        } else {
            out.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
        }
    }
    return out;
}

const std::unordered_map<std::string, RaceGroup>& race_table() {
    static const std::unordered_map<std::string, RaceGroup> table = {
        {"WHITE", RaceGroup::Caucasian},
        {"WHITE - OTHER EUROPEAN", RaceGroup::Caucasian},
        {"WHITE - RUSSIAN", RaceGroup::Caucasian},
        {"WHITE - BRAZILIAN", RaceGroup::Caucasian},
        {"PORTUGUESE", RaceGroup::Caucasian},
        {"WHITE - EASTERN EUROPEAN", RaceGroup::Caucasian},
        {"HISPANIC OR LATINO", RaceGroup::Deleted},
        {"PATIENT DECLINED TO ANSWER", RaceGroup::Deleted},
        {"MULTIPLE RACE/ETHNICITY", RaceGroup::Deleted},
        {"UNABLE TO OBTAIN", RaceGroup::Deleted},
        {"HISPANIC/LATINO - PUERTO RICAN", RaceGroup::Multiethnic},
        {"HISPANIC/LATINO - DOMINICAN", RaceGroup::Multiethnic},
        {"UNKNOWN", RaceGroup::Multiethnic},
        {"HISPANIC/LATINO - GUATEMALAN", RaceGroup::Multiethnic},
        {"HISPANIC/LATINO - SALVADORAN", RaceGroup::Multiethnic},
        {"HISPANIC/LATINO - COLUMBIAN", RaceGroup::Multiethnic},
        {"HISPANIC/LATINO - MEXICAN", RaceGroup::Multiethnic},
        {"SOUTH AMERICAN", RaceGroup::Multiethnic},
        {"HISPANIC/LATINO - HONDURAN", RaceGroup::Multiethnic},
        {"HISPANIC/LATINO - CUBAN", RaceGroup::Multiethnic},
        {"HISPANIC/LATINO - CENTRAL AMERICAN", RaceGroup::Multiethnic},
        {"BLACK/AFRICAN AMERICAN", RaceGroup::NonCaucasian},
        {"BLACK/CAPE VERDEAN", RaceGroup::NonCaucasian},
        {"BLACK/AFRICAN", RaceGroup::NonCaucasian},
        {"BLACK/CARIBBEAN ISLAND", RaceGroup::NonCaucasian},
        {"ASIAN - CHINESE", RaceGroup::NonCaucasian},
        {"ASIAN", RaceGroup::NonCaucasian},
        {"ASIAN - ASIAN INDIAN", RaceGroup::NonCaucasian},
        {"ASIAN - SOUTH EAST ASIAN", RaceGroup::NonCaucasian},
        {"AMERICAN INDIAN/ALASKA NATIVE", RaceGroup::NonCaucasian},
        {"ASIAN - KOREAN", RaceGroup::NonCaucasian},
        {"NATIVE HAWAIIAN OR OTHER PACIFIC ISLANDER", RaceGroup::NonCaucasian},
        {"OTHER", RaceGroup::Other},
    };
    return table;
}

const std::unordered_map<std::string, LanguageGroup>& language_table() {
    static const std::unordered_map<std::string, LanguageGroup> table = {
        {"ENGLISH", LanguageGroup::English},
        {"SPANISH", LanguageGroup::NonEnglish},
        {"RUSSIAN", LanguageGroup::NonEnglish},
        {"CHINESE", LanguageGroup::NonEnglish},
        {"KABUVERDIANU", LanguageGroup::NonEnglish},
        {"HAITIAN", LanguageGroup::NonEnglish},
        {"PORTUGUESE", LanguageGroup::NonEnglish},
        {"OTHER", LanguageGroup::NonEnglish},
        {"VIETNAMESE", LanguageGroup::NonEnglish},
        {"MODERN GREEK (1453-)", LanguageGroup::NonEnglish},
        {"ITALIAN", LanguageGroup::NonEnglish},
        {"ARABIC", LanguageGroup::NonEnglish},
        {"AMERICAN SIGN LANGUAGE", LanguageGroup::NonEnglish},
        {"POLISH", LanguageGroup::NonEnglish},
        {"PERSIAN", LanguageGroup::NonEnglish},
        {"KOREAN", LanguageGroup::NonEnglish},
        {"THAI", LanguageGroup::NonEnglish},
        {"FRENCH", LanguageGroup::NonEnglish},
        {"AMHARIC", LanguageGroup::NonEnglish},
        {"UNKNOWN", LanguageGroup::Unknown},
    };
    return table;
}

const std::unordered_map<std::string, InsuranceGroup>& insurance_table() {
    static const std::unordered_map<std::string, InsuranceGroup> table = {
        {"MEDICARE", InsuranceGroup::Public},
        {"MEDICAID", InsuranceGroup::Public},
        {"PRIVATE", InsuranceGroup::Private},
        {"OTHER", InsuranceGroup::Private},
        {"UNKNOWN", InsuranceGroup::Unknown},
        {"NO CHARGE", InsuranceGroup::Unknown},
    };
    return table;
}

} // namespace

std::optional<RaceGroup> lookup_race(std::string_view raw) {
    const auto& t = race_table();
    auto it = t.find(canonical(raw));
    if (it == t.end()) return std::nullopt;
    return it->second;
}

std::optional<LanguageGroup> lookup_language(std::string_view raw) {
    const auto& t = language_table();
    auto it = t.find(canonical(raw));
    if (it == t.end()) return std::nullopt;
    return it->second;
}

std::optional<InsuranceGroup> lookup_insurance(std::string_view raw) {
    const auto& t = insurance_table();
    auto it = t.find(canonical(raw));
    if (it == t.end()) return std::nullopt;
    return it->second;
}

std::optional<Gender> lookup_gender(std::string_view raw) {
    const std::string key = canonical(raw);
    if (key == "F" || key == "FEMALE") return Gender::Female;
    if (key == "M" || key == "MALE") return Gender::Male;
    return std::nullopt;
}

AgeGroup band_age(int age_years, const AgeBands& bands) {
    if (age_years <= bands.until45_max) return AgeGroup::Until45;
    if (age_years <= bands.until65_max) return AgeGroup::Until65;
    return AgeGroup::Older;
}

namespace {

std::optional<long> parse_int(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    if (b == e) return std::nullopt;
    bool neg = false;
    if (s[b] == '+' || s[b] == '-') {
        neg = s[b] == '-';
        ++b;
        if (b == e) return std::nullopt;
    }
    long v = 0;
    for (std::size_t i = b; i < e; ++i) {
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return std::nullopt;
        v = v * 10 + (s[i] - '0');
        if (v > 1000000) return std::nullopt;
    }
    return neg ? -v : v;
}

} // namespace

DemographicProfile map_demographics(const RawDemographics& raw, const AgeBands& bands, MappingCounters* counters) {
    DemographicProfile p;

    const auto age = parse_int(raw.age);
    if (!age || *age < 0) throw InputError("invalid age value: '" + raw.age + "'");
    p.age_years = static_cast<int>(*age);
    p.age_group = band_age(p.age_years, bands);

    if (auto g = lookup_race(raw.race)) {
        p.race_group = *g;
    } else {
        p.race_group = RaceGroup::Other;
        if (counters) ++counters->unmapped_race;
    }
    if (auto g = lookup_language(raw.language)) {
        p.language_group = *g;
    } else {
        p.language_group = LanguageGroup::Unknown;
        if (counters) ++counters->unmapped_language;
    }
    if (auto g = lookup_insurance(raw.insurance)) {
        p.insurance_group = *g;
    } else {
        p.insurance_group = InsuranceGroup::Unknown;
        if (counters) ++counters->unmapped_insurance;
    }
    if (auto g = lookup_gender(raw.gender)) {
        p.gender = *g;
    } else {
        p.gender = Gender::Unknown;
        if (counters) ++counters->unmapped_gender;
    }

    if (auto a = parse_int(raw.acuity); a && *a >= 1 && *a <= 5) p.acuity = static_cast<int>(*a);
    p.disposition_raw = raw.disposition;
    return p;
}

} // namespace fairlens
