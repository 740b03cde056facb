#include <doctest.h>

#include "fairlens/demographics.hpp"
#include "fairlens/errors.hpp"

using namespace fairlens;

TEST_CASE("race lookups") {
    CHECK(lookup_race("WHITE -- RUSSIAN") == RaceGroup::Caucasian);
    CHECK(lookup_race("WHITE - RUSSIAN") == RaceGroup::Caucasian); // single-hyphen source form
    CHECK(lookup_race("HISPANIC OR LATINO") == RaceGroup::Deleted);
    CHECK(lookup_race("UNKNOWN") == RaceGroup::Multiethnic);
    CHECK(lookup_race("OTHER") == RaceGroup::Other);
    CHECK(lookup_race("BLACK/AFRICAN AMERICAN") == RaceGroup::NonCaucasian);
    CHECK_FALSE(lookup_race("MARTIAN").has_value());
}

TEST_CASE("language and insurance lookups") {
    CHECK(lookup_language("SPANISH") == LanguageGroup::NonEnglish);
    CHECK(lookup_language("ENGLISH") == LanguageGroup::English);
    CHECK(lookup_language("UNKNOWN") == LanguageGroup::Unknown);
    CHECK(lookup_insurance("NO CHARGE") == InsuranceGroup::Unknown);
    CHECK(lookup_insurance("MEDICARE") == InsuranceGroup::Public);
    CHECK(lookup_insurance("OTHER") == InsuranceGroup::Private);
    CHECK_FALSE(lookup_insurance("BARTER").has_value());
}

TEST_CASE("age banding boundaries") {
    AgeBands bands;
    CHECK(band_age(0, bands) == AgeGroup::Until45);
    CHECK(band_age(45, bands) == AgeGroup::Until45);
    CHECK(band_age(46, bands) == AgeGroup::Until65);
    CHECK(band_age(65, bands) == AgeGroup::Until65);
    CHECK(band_age(66, bands) == AgeGroup::Older);

    AgeBands custom{30, 60};
    CHECK(band_age(31, custom) == AgeGroup::Until65);
    CHECK(band_age(61, custom) == AgeGroup::Older);
}

TEST_CASE("map_demographics builds a full profile") {
    RawDemographics raw;
    raw.race = "WHITE -- RUSSIAN";
    raw.age = "52";
    raw.gender = "F";
    raw.insurance = "NO CHARGE";
    raw.language = "SPANISH";
    raw.acuity = "3";
    raw.disposition = "HOME HEALTH CARE";

    MappingCounters counters;
    const auto p = map_demographics(raw, {}, &counters);
    CHECK(p.race_group == RaceGroup::Caucasian);
    CHECK(p.age_years == 52);
    CHECK(p.age_group == AgeGroup::Until65);
    CHECK(p.gender == Gender::Female);
    CHECK(p.insurance_group == InsuranceGroup::Unknown);
    CHECK(p.language_group == LanguageGroup::NonEnglish);
    CHECK(p.acuity == 3);
    CHECK(p.disposition_raw == "HOME HEALTH CARE"); // untouched
    CHECK(counters.total() == 0);
}

TEST_CASE("unrecognized values bucket to unknown and count") {
    RawDemographics raw;
    raw.race = "SOMETHING NEW";
    raw.age = "30";
    raw.gender = "X";
    raw.insurance = "BARTER";
    raw.language = "KLINGON";

    MappingCounters counters;
    const auto p = map_demographics(raw, {}, &counters);
    CHECK(p.race_group == RaceGroup::Other);
    CHECK(p.gender == Gender::Unknown);
    CHECK(p.insurance_group == InsuranceGroup::Unknown);
    CHECK(p.language_group == LanguageGroup::Unknown);
    CHECK(counters.total() == 4);
}

TEST_CASE("invalid age is a validation error") {
    RawDemographics raw;
    raw.age = "-3";
    CHECK_THROWS_AS(map_demographics(raw), InputError);
    raw.age = "forty";
    CHECK_THROWS_AS(map_demographics(raw), InputError);
    raw.age = "";
    CHECK_THROWS_AS(map_demographics(raw), InputError);
}

TEST_CASE("malformed acuity becomes absent") {
    RawDemographics raw;
    raw.age = "40";
    raw.acuity = "9";
    CHECK_FALSE(map_demographics(raw).acuity.has_value());
    raw.acuity = "x";
    CHECK_FALSE(map_demographics(raw).acuity.has_value());
    raw.acuity = "";
    CHECK_FALSE(map_demographics(raw).acuity.has_value());
}
