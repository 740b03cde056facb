#include <doctest.h>

#include <sstream>

#include "fairlens/errors.hpp"
#include "fairlens/triage.hpp"

using namespace fairlens;

namespace {

// Independent oracle: a straight transcription of the five-row decision
// table, kept deliberately separate from the production logic.
int esi_oracle(bool life_saving, bool high_risk_confused_or_pain, int resources, bool danger_vitals) {
    if (life_saving) return 1;
    if (high_risk_confused_or_pain) return 2;
    if (resources == 0) return 5;
    if (resources == 1) return 4;
    return danger_vitals ? 2 : 3;
}

Vitals danger_vitals_sample(int which) {
    Vitals v;
    switch (which) {
        case 1: v.heart_rate = 130; break;
        case 2: v.respiratory_rate = 28; break;
        case 3: v.spo2 = 85; break;
        case 4:
            v.heart_rate = 130;
            v.respiratory_rate = 28;
            v.spo2 = 85;
            break;
        default: break; // all in range
    }
    return v;
}

} // namespace

TEST_CASE("esi level 1: immediate life-saving need") {
    PatientPresentation p;
    p.life_saving_needed = true;
    p.expected_resources = 3;
    CHECK(assign_esi(p).level == 1);
}

TEST_CASE("esi level 2: severe pain at the 7 boundary") {
    PatientPresentation p;
    p.severe_pain = 8;
    CHECK(assign_esi(p).level == 2);
    p.severe_pain = 7;
    CHECK(assign_esi(p).level == 2);
    p.severe_pain = 6;
    p.expected_resources = 0;
    CHECK(assign_esi(p).level == 5);
}

TEST_CASE("esi levels 5 and 4 by expected resources") {
    PatientPresentation p;
    p.expected_resources = 0;
    CHECK(assign_esi(p).level == 5);
    p.expected_resources = 1;
    CHECK(assign_esi(p).level == 4);
}

TEST_CASE("esi level 3 with vitals in range") {
    PatientPresentation p;
    p.expected_resources = 3;
    const auto a = assign_esi(p);
    CHECK(a.level == 3);
    CHECK_FALSE(a.danger_zone_flag);
    CHECK_FALSE(a.upgraded);
}

TEST_CASE("danger-zone vitals upgrade level 3 to 2") {
    PatientPresentation p;
    p.expected_resources = 3;
    p.vitals.spo2 = 85;
    const auto a = assign_esi(p);
    CHECK(a.level == 2);
    CHECK(a.danger_zone_flag);
    CHECK(a.upgraded);
}

TEST_CASE("upgraded implies danger zone across the grid") {
    for (int ls = 0; ls < 2; ++ls)
        for (int hr = 0; hr < 2; ++hr)
            for (int res = 0; res <= 3; ++res)
                for (int dv = 0; dv <= 4; ++dv) {
                    PatientPresentation p;
                    p.life_saving_needed = ls;
                    p.high_risk = hr;
                    p.expected_resources = res;
                    p.vitals = danger_vitals_sample(dv);
                    const auto a = assign_esi(p);
                    if (a.upgraded) CHECK(a.danger_zone_flag);
                    CHECK(a.level >= 1);
                    CHECK(a.level <= 5);
                }
}

TEST_CASE("assign_esi agrees with the brute-force decision table") {
    // Exhaustive over life-saving x (high-risk, confused, pain) x resources x
    // vitals; the level-2 gate is a disjunction, so all three triggers are
    // driven independently.
    for (int ls = 0; ls < 2; ++ls)
        for (int hr = 0; hr < 2; ++hr)
            for (int conf = 0; conf < 2; ++conf)
                for (int pain : {0, 6, 7, 10})
                    for (int res : {0, 1, 2, 3})
                        for (int dv = 0; dv <= 4; ++dv) {
                            PatientPresentation p;
                            p.life_saving_needed = ls;
                            p.high_risk = hr;
                            p.confused = conf;
                            p.severe_pain = pain;
                            p.expected_resources = res;
                            p.vitals = danger_vitals_sample(dv);
                            const int expected = esi_oracle(ls, hr || conf || pain >= 7, res, dv != 0);
                            CHECK(assign_esi(p).level == expected);
                        }
}

TEST_CASE("custom thresholds move the danger zone") {
    PatientPresentation p;
    p.expected_resources = 2;
    p.vitals.heart_rate = 105;
    CHECK(assign_esi(p).level == 2); // default max 100
    VitalThresholds relaxed;
    relaxed.heart_rate_max = 110;
    CHECK(assign_esi(p, relaxed).level == 3);
}

TEST_CASE("generated log is structurally well formed") {
    Scenario s;
    s.n_cases = 1;
    const auto log = generate_log(s, 7);
    REQUIRE(log.cases.size() == 1);
    const auto& events = log.cases[0].events;
    REQUIRE(events.size() >= 3);
    CHECK(events.front().activity == kEnterEd);
    CHECK(events.back().activity == kDischarge);
    for (std::size_t i = 1; i < events.size(); ++i) CHECK(events[i].timestamp >= events[i - 1].timestamp);
    // triage carries the assigned acuity
    bool triage_seen = false;
    for (const auto& ev : events)
        if (ev.activity == kTriage) {
            triage_seen = true;
            REQUIRE(ev.find_extra("acuity") != nullptr);
        }
    CHECK(triage_seen);
}

TEST_CASE("same seed twice gives byte-identical logs") {
    Scenario s;
    s.n_cases = 50;
    const auto a = generate_log(s, 42);
    const auto b = generate_log(s, 42);
    std::ostringstream outa, outb;
    write_log(outa, a);
    write_log(outb, b);
    CHECK(outa.str() == outb.str());

    const auto c = generate_log(s, 43);
    std::ostringstream outc;
    write_log(outc, c);
    CHECK(outa.str() != outc.str());
}

TEST_CASE("generated logs survive load, impute, and filter without rejects") {
    Scenario s;
    s.n_cases = 200;
    const auto log = generate_log(s, 11);
    std::ostringstream out;
    write_log(out, log);
    std::istringstream in(out.str());
    auto loaded = load_log(in);
    CHECK(loaded.provenance.rejected_rows == 0);
    CHECK(loaded.event_count() == log.event_count());
    loaded = map_log_demographics(impute_case_attributes(std::move(loaded)));
    CHECK(loaded.provenance.invalid_profiles == 0);
    loaded = filter_for_analysis(std::move(loaded));
    for (const auto& c : loaded.cases) {
        REQUIRE(c.profile.has_value());
        CHECK(c.profile->acuity.has_value());
    }
}

TEST_CASE("time multiplier scales mean duration for the targeted cell") {
    // Balanced two-group scenario pinned to acuity 3; the multiplier must
    // surface as a ~1.5x ratio of mean durations (law of large numbers).
    Scenario s;
    s.n_cases = 4000;
    s.insurance_mix = {{"MEDICARE", 0.5}, {"PRIVATE", 0.5}};
    s.life_saving_prob = 0;
    s.high_risk_prob = 0;
    s.confused_prob = 0;
    s.severe_pain_prob = 0;
    s.danger_vitals_prob = 0;
    s.resources_dist = {{2, 1.0}};
    BiasEntry bias;
    bias.attribute = "insurance";
    bias.group = "Public";
    bias.acuity = 3;
    bias.time_multiplier = 1.5;
    s.bias.entries.push_back(bias);

    const auto log = generate_log(s, 123);
    double public_sum = 0, private_sum = 0;
    std::size_t public_n = 0, private_n = 0;
    for (const auto& c : log.cases) {
        const auto duration = static_cast<double>(c.events.back().timestamp - c.events.front().timestamp);
        const std::string* ins = c.events.front().find_extra("insurance");
        REQUIRE(ins != nullptr);
        if (*ins == "MEDICARE") {
            public_sum += duration;
            ++public_n;
        } else {
            private_sum += duration;
            ++private_n;
        }
    }
    REQUIRE(public_n > 1000);
    REQUIRE(private_n > 1000);
    const double ratio = (public_sum / public_n) / (private_sum / private_n);
    CHECK(ratio == doctest::Approx(1.5).epsilon(0.10));
}

TEST_CASE("invalid bias config is rejected") {
    BiasConfig bias;
    BiasEntry e;
    e.attribute = "insurance";
    e.group = "Public";
    e.time_multiplier = 0;
    bias.entries.push_back(e);
    CHECK_THROWS_AS(validate_bias_config(bias), ConfigError);

    bias.entries[0].time_multiplier = 1.0;
    bias.entries[0].extra_waste_redo_prob = 1.5;
    CHECK_THROWS_AS(validate_bias_config(bias), ConfigError);

    bias.entries[0].extra_waste_redo_prob = 0;
    bias.entries[0].attribute = "diagnosis";
    CHECK_THROWS_AS(validate_bias_config(bias), ConfigError);

    bias.entries[0].attribute = "insurance";
    bias.entries[0].group = "Plutocrat";
    CHECK_THROWS_AS(validate_bias_config(bias), ConfigError);
    CHECK_THROWS_AS(generate_log(10, bias, 1), ConfigError);
}

TEST_CASE("waste redo injection duplicates entry events") {
    Scenario s;
    s.n_cases = 200;
    BiasEntry e;
    e.attribute = "gender";
    e.group = "Female";
    e.extra_waste_redo_prob = 1.0;
    s.bias.entries.push_back(e);
    const auto log = generate_log(s, 5);
    bool saw_duplicate = false;
    for (const auto& c : log.cases) {
        int enters = 0;
        for (const auto& ev : c.events)
            if (ev.activity == kEnterEd) ++enters;
        const std::string* gender = c.events.front().find_extra("gender");
        REQUIRE(gender != nullptr);
        if (*gender == "F") {
            CHECK(enters == 2);
            saw_duplicate = true;
        } else {
            CHECK(enters == 1);
        }
    }
    CHECK(saw_duplicate);
}

TEST_CASE("decision shift overrides the disposition mix") {
    Scenario s;
    s.n_cases = 300;
    BiasEntry e;
    e.attribute = "language";
    e.group = "NonEnglish";
    e.decision_shift = {{"FACILITY", 1.0}};
    s.bias.entries.push_back(e);
    s.language_mix = {{"SPANISH", 0.5}, {"ENGLISH", 0.5}};
    const auto log = generate_log(s, 9);
    for (const auto& c : log.cases) {
        const std::string* lang = c.events.front().find_extra("language");
        REQUIRE(lang != nullptr);
        const std::string* disp = c.events.back().find_extra("disposition");
        REQUIRE(disp != nullptr);
        if (*lang == "SPANISH") CHECK(*disp == "SKILLED NURSING FACILITY");
    }
}

TEST_CASE("scenario json parsing and validation") {
    const auto s = scenario_from_json_text(R"({
        "n_cases": 10,
        "population": {"insurance": {"MEDICARE": 1.0}, "age_min": 20, "age_max": 30},
        "presentation": {"life_saving_prob": 0.5},
        "service": {"middle_events_min": 2, "middle_events_max": 2},
        "bias": [{"attribute": "insurance", "group": "Public", "acuity": 3, "time_multiplier": 2.0}]
    })");
    CHECK(s.n_cases == 10);
    CHECK(s.life_saving_prob == 0.5);
    CHECK(s.middle_events_min == 2);
    REQUIRE(s.bias.entries.size() == 1);
    CHECK(s.bias.entries[0].time_multiplier == 2.0);

    CHECK_THROWS_AS(scenario_from_json_text("{"), ConfigError);
    CHECK_THROWS_AS(scenario_from_json_text(R"({"n_cases": 0})"), ConfigError);
    CHECK_THROWS_AS(scenario_from_json_text(R"({"presentation": {"life_saving_prob": 1.5}})"), ConfigError);
    CHECK_THROWS_AS(scenario_from_json_text(R"({"bias": [{"attribute": "insurance"}]})"), ConfigError);
}
