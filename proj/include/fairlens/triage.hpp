#ifndef FAIRLENS_TRIAGE_HPP_
#define FAIRLENS_TRIAGE_HPP_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fairlens/demographics.hpp"
#include "fairlens/eventlog.hpp"

namespace fairlens {

struct Vitals {
    double heart_rate = 80;        // bpm
    double respiratory_rate = 16;  // breaths/min
    double spo2 = 98;              // percent
};

// Danger-zone cutoffs (adult bands). These are configuration, not ground
// truth; a vital outside its bound trips the level-3 -> 2 upgrade.
struct VitalThresholds {
    double heart_rate_max = 100;
    double respiratory_rate_max = 20;
    double spo2_min = 92;

    bool in_danger_zone(const Vitals& v) const {
        return v.heart_rate > heart_rate_max || v.respiratory_rate > respiratory_rate_max || v.spo2 < spo2_min;
    }
};

struct PatientPresentation {
    bool life_saving_needed = false;
    bool high_risk = false;
    bool confused = false;
    int severe_pain = 0;       // 0-10 pain score
    int expected_resources = 0;
    Vitals vitals;
    DemographicProfile demographics; // acuity unset; assigned by triage
};

struct EsiAssignment {
    int level = 5;               // 1..5
    bool danger_zone_flag = false;
    bool upgraded = false;       // level-3 candidate raised to 2
};

// Five-level ESI decision logic: level 1 for immediate life-saving need;
// level 2 for high risk, confusion, or pain >= 7; otherwise by expected
// resources (none -> 5, one -> 4, many -> 3), with a deterministic upgrade
// 3 -> 2 when any vital sign is in the danger zone.
EsiAssignment assign_esi(const PatientPresentation& p, const VitalThresholds& thresholds = {});

// One bias cell: applies to cases whose mapped group for `attribute` equals
// `group` at the given acuity (or all acuities when unset).
struct BiasEntry {
    std::string attribute;              // race | age | gender | insurance | language
    std::string group;                  // mapped group label, e.g. "Public"
    std::optional<int> acuity;          // 1..5, empty = all
    double time_multiplier = 1.0;       // > 0, scales every service duration
    double extra_waste_redo_prob = 0.0; // [0,1], chance of an injected waste re-do
    std::map<std::string, double> decision_shift; // decision group -> weight
};

struct BiasConfig {
    std::vector<BiasEntry> entries;
};

// Throws ConfigError on out-of-range probabilities/multipliers or unknown
// attribute/group/decision labels.
void validate_bias_config(const BiasConfig& bias);

// Log-normal service-time parameters (log-seconds).
struct DurationParams {
    double mu = 6.0;    // exp(6) ~ 400 s
    double sigma = 0.5;
};

// Synthetic-population scenario. Weights need not be normalized.
struct Scenario {
    std::size_t n_cases = 1000;

    // Population mix: raw source strings so generated logs exercise the
    // category mappings end to end.
    std::vector<std::pair<std::string, double>> race_mix = {
        {"WHITE", 0.50}, {"BLACK/AFRICAN AMERICAN", 0.22}, {"ASIAN", 0.10},
        {"HISPANIC/LATINO - PUERTO RICAN", 0.10}, {"OTHER", 0.08}};
    std::vector<std::pair<std::string, double>> language_mix = {
        {"ENGLISH", 0.70}, {"SPANISH", 0.15}, {"RUSSIAN", 0.05}, {"UNKNOWN", 0.10}};
    std::vector<std::pair<std::string, double>> insurance_mix = {
        {"MEDICARE", 0.30}, {"MEDICAID", 0.15}, {"PRIVATE", 0.40}, {"UNKNOWN", 0.15}};
    std::vector<std::pair<std::string, double>> gender_mix = {{"F", 0.52}, {"M", 0.48}};
    int age_min = 18;
    int age_max = 95;

    // Presentation sampling.
    double life_saving_prob = 0.02;
    double high_risk_prob = 0.08;
    double confused_prob = 0.04;
    double severe_pain_prob = 0.10; // pain >= 7 when it fires
    std::vector<std::pair<int, double>> resources_dist = {{0, 0.10}, {1, 0.20}, {2, 0.40}, {3, 0.30}};
    double danger_vitals_prob = 0.08;

    // Service structure: number of middle events (vitals/medicine) per case
    // and the mix between them.
    int middle_events_min = 1;
    int middle_events_max = 4;
    std::vector<std::pair<std::string, double>> middle_mix = {
        {std::string(kVitalSign), 0.60}, {std::string(kMedDispense), 0.25}, {std::string(kMedReconcile), 0.15}};

    // Per-acuity duration parameters (index 1..5); index 0 unused.
    std::array<DurationParams, 6> durations = {DurationParams{}, {7.2, 0.6}, {7.0, 0.6}, {6.8, 0.6}, {6.4, 0.6}, {6.0, 0.6}};

    // Disposition mix: raw strings fed through the discharge lookup.
    std::vector<std::pair<std::string, double>> disposition_mix = {
        {"HOME", 0.62}, {"HOME HEALTH CARE", 0.08}, {"SKILLED NURSING FACILITY", 0.08},
        {"DIED", 0.02}, {"AGAINST ADVICE", 0.03}, {"UNKNOWN", 0.17}};

    VitalThresholds thresholds;
    AgeBands age_bands;
    std::int64_t start_time = 1735689600; // 2025-01-01 00:00:00
    std::int64_t case_spacing_seconds = 60;

    BiasConfig bias;
};

// Parses a scenario JSON document (all keys optional). Throws ConfigError
// naming the offending key.
Scenario scenario_from_json_text(const std::string& text);
Scenario scenario_from_json_file(const std::string& path);

// Generates a synthetic ED log: Enter -> Triage -> middle events ->
// Discharge, acuity assigned by assign_esi over a sampled presentation,
// durations log-normal per acuity. Bias entries scale durations, inject
// waste re-dos, or override the disposition distribution for their cell.
// Deterministic for a fixed (scenario, seed); case i depends only on
// (seed, i).
EventLog generate_log(const Scenario& scenario, std::uint64_t seed);
EventLog generate_log(std::size_t n_cases, const BiasConfig& bias, std::uint64_t seed);

} // namespace fairlens

#endif
