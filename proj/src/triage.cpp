#include "fairlens/triage.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "fairlens/errors.hpp"
#include "fairlens/rng.hpp"

namespace fairlens {

EsiAssignment assign_esi(const PatientPresentation& p, const VitalThresholds& thresholds) {
    EsiAssignment a;
    a.danger_zone_flag = thresholds.in_danger_zone(p.vitals);
    if (p.life_saving_needed) {
        a.level = 1;
        return a;
    }
    if (p.high_risk || p.confused || p.severe_pain >= 7) {
        a.level = 2;
        return a;
    }
    if (p.expected_resources == 0) {
        a.level = 5;
        return a;
    }
    if (p.expected_resources == 1) {
        a.level = 4;
        return a;
    }
    // Many resources: level 3 unless a danger-zone vital forces the upgrade.
    if (a.danger_zone_flag) {
        a.level = 2;
        a.upgraded = true;
    } else {
        a.level = 3;
    }
    return a;
}

namespace {

const std::set<std::string>& valid_bias_attributes() {
    static const std::set<std::string> s = {"race", "age", "gender", "insurance", "language"};
    return s;
}

bool valid_group_label(const std::string& attribute, const std::string& group) {
    if (attribute == "race")
        return group == "Caucasian" || group == "NonCaucasian" || group == "Multiethnic" || group == "Other" ||
               group == "Deleted";
    if (attribute == "age") return group == "Until45" || group == "Until65" || group == "Older";
    if (attribute == "gender") return group == "Female" || group == "Male" || group == "Unknown";
    if (attribute == "insurance") return group == "Public" || group == "Private" || group == "Unknown";
    if (attribute == "language") return group == "English" || group == "NonEnglish" || group == "Unknown";
    return false;
}

bool valid_decision_label(const std::string& label) {
    return label == "HOME" || label == "FACILITY" || label == "DEATH" || label == "AGAINST_ADVICE" || label == "UNKNOWN";
}

// Case group label for a bias attribute.
std::string group_of(const DemographicProfile& profile, const std::string& attribute) {
    if (attribute == "race") return std::string(to_string(profile.race_group));
    if (attribute == "age") return std::string(to_string(profile.age_group));
    if (attribute == "gender") return std::string(to_string(profile.gender));
    if (attribute == "insurance") return std::string(to_string(profile.insurance_group));
    return std::string(to_string(profile.language_group));
}

// Canonical raw disposition emitted for a shifted decision group.
std::string disposition_for_group(const std::string& group) {
    if (group == "HOME") return "HOME";
    if (group == "FACILITY") return "SKILLED NURSING FACILITY";
    if (group == "DEATH") return "DIED";
    if (group == "AGAINST_ADVICE") return "AGAINST ADVICE";
    return "UNKNOWN";
}

} // namespace

void validate_bias_config(const BiasConfig& bias) {
    for (std::size_t i = 0; i < bias.entries.size(); ++i) {
        const auto& e = bias.entries[i];
        const std::string where = "bias[" + std::to_string(i) + "]";
        if (!valid_bias_attributes().count(e.attribute))
            throw ConfigError(where + ".attribute: unknown attribute '" + e.attribute + "'");
        if (!valid_group_label(e.attribute, e.group))
            throw ConfigError(where + ".group: unknown group '" + e.group + "' for attribute '" + e.attribute + "'");
        if (e.acuity && (*e.acuity < 1 || *e.acuity > 5))
            throw ConfigError(where + ".acuity: must be in 1..5");
        if (!(e.time_multiplier > 0))
            throw ConfigError(where + ".time_multiplier: must be > 0");
        if (e.extra_waste_redo_prob < 0 || e.extra_waste_redo_prob > 1)
            throw ConfigError(where + ".extra_waste_redo_prob: must be in [0,1]");
        double shift_total = 0;
        for (const auto& [label, w] : e.decision_shift) {
            if (!valid_decision_label(label))
                throw ConfigError(where + ".decision_shift: unknown decision group '" + label + "'");
            if (w < 0) throw ConfigError(where + ".decision_shift: negative weight for '" + label + "'");
            shift_total += w;
        }
        if (!e.decision_shift.empty() && shift_total <= 0)
            throw ConfigError(where + ".decision_shift: weights sum to zero");
    }
}

namespace {

using nlohmann::json;

std::vector<std::pair<std::string, double>> mix_from_json(const json& j, const std::string& key) {
    std::vector<std::pair<std::string, double>> out;
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!it.value().is_number()) throw ConfigError(key + "." + it.key() + ": weight must be a number");
        const double w = it.value().get<double>();
        if (w < 0) throw ConfigError(key + "." + it.key() + ": weight must be >= 0");
        out.emplace_back(it.key(), w);
    }
    if (out.empty()) throw ConfigError(key + ": empty distribution");
    return out;
}

} // namespace

Scenario scenario_from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("scenario: invalid JSON: ") + e.what());
    }
    Scenario s;
    if (j.contains("n_cases")) {
        const auto n = j["n_cases"].get<std::int64_t>();
        if (n < 1) throw ConfigError("n_cases: must be >= 1");
        s.n_cases = static_cast<std::size_t>(n);
    }
    if (j.contains("population")) {
        const auto& p = j["population"];
        if (p.contains("race")) s.race_mix = mix_from_json(p["race"], "population.race");
        if (p.contains("language")) s.language_mix = mix_from_json(p["language"], "population.language");
        if (p.contains("insurance")) s.insurance_mix = mix_from_json(p["insurance"], "population.insurance");
        if (p.contains("gender")) s.gender_mix = mix_from_json(p["gender"], "population.gender");
        if (p.contains("age_min")) s.age_min = p["age_min"].get<int>();
        if (p.contains("age_max")) s.age_max = p["age_max"].get<int>();
        if (s.age_min < 0 || s.age_max < s.age_min) throw ConfigError("population.age_min/age_max: invalid range");
    }
    if (j.contains("presentation")) {
        const auto& p = j["presentation"];
        auto prob = [&p](const char* key, double dflt) {
            if (!p.contains(key)) return dflt;
            const double v = p[key].get<double>();
            if (v < 0 || v > 1) throw ConfigError(std::string("presentation.") + key + ": must be in [0,1]");
            return v;
        };
        s.life_saving_prob = prob("life_saving_prob", s.life_saving_prob);
        s.high_risk_prob = prob("high_risk_prob", s.high_risk_prob);
        s.confused_prob = prob("confused_prob", s.confused_prob);
        s.severe_pain_prob = prob("severe_pain_prob", s.severe_pain_prob);
        s.danger_vitals_prob = prob("danger_vitals_prob", s.danger_vitals_prob);
        if (p.contains("resources")) {
            s.resources_dist.clear();
            for (auto it = p["resources"].begin(); it != p["resources"].end(); ++it) {
                const int r = std::stoi(it.key());
                if (r < 0) throw ConfigError("presentation.resources: negative resource count");
                s.resources_dist.emplace_back(r, it.value().get<double>());
            }
            if (s.resources_dist.empty()) throw ConfigError("presentation.resources: empty distribution");
        }
    }
    if (j.contains("service")) {
        const auto& sv = j["service"];
        if (sv.contains("middle_events_min")) s.middle_events_min = sv["middle_events_min"].get<int>();
        if (sv.contains("middle_events_max")) s.middle_events_max = sv["middle_events_max"].get<int>();
        if (s.middle_events_min < 0 || s.middle_events_max < s.middle_events_min)
            throw ConfigError("service.middle_events_min/max: invalid range");
        if (sv.contains("middle_mix")) s.middle_mix = mix_from_json(sv["middle_mix"], "service.middle_mix");
        if (sv.contains("durations")) {
            for (auto it = sv["durations"].begin(); it != sv["durations"].end(); ++it) {
                const int a = std::stoi(it.key());
                if (a < 1 || a > 5) throw ConfigError("service.durations: acuity key must be 1..5");
                DurationParams dp;
                dp.mu = it.value().value("mu", dp.mu);
                dp.sigma = it.value().value("sigma", dp.sigma);
                if (dp.sigma < 0) throw ConfigError("service.durations: sigma must be >= 0");
                s.durations[static_cast<std::size_t>(a)] = dp;
            }
        }
    }
    if (j.contains("disposition")) s.disposition_mix = mix_from_json(j["disposition"], "disposition");
    if (j.contains("thresholds")) {
        const auto& t = j["thresholds"];
        s.thresholds.heart_rate_max = t.value("heart_rate_max", s.thresholds.heart_rate_max);
        s.thresholds.respiratory_rate_max = t.value("respiratory_rate_max", s.thresholds.respiratory_rate_max);
        s.thresholds.spo2_min = t.value("spo2_min", s.thresholds.spo2_min);
    }
    if (j.contains("age_bands")) {
        const auto& b = j["age_bands"];
        s.age_bands.until45_max = b.value("until45_max", s.age_bands.until45_max);
        s.age_bands.until65_max = b.value("until65_max", s.age_bands.until65_max);
        if (s.age_bands.until45_max >= s.age_bands.until65_max)
            throw ConfigError("age_bands: until45_max must be below until65_max");
    }
    if (j.contains("start_time")) s.start_time = j["start_time"].get<std::int64_t>();
    if (j.contains("case_spacing_seconds")) s.case_spacing_seconds = j["case_spacing_seconds"].get<std::int64_t>();
    if (j.contains("bias")) {
        for (const auto& jb : j["bias"]) {
            BiasEntry e;
            if (!jb.contains("attribute")) throw ConfigError("bias[].attribute: required");
            if (!jb.contains("group")) throw ConfigError("bias[].group: required");
            e.attribute = jb["attribute"].get<std::string>();
            e.group = jb["group"].get<std::string>();
            if (jb.contains("acuity") && !jb["acuity"].is_null()) e.acuity = jb["acuity"].get<int>();
            e.time_multiplier = jb.value("time_multiplier", 1.0);
            e.extra_waste_redo_prob = jb.value("extra_waste_redo_prob", 0.0);
            if (jb.contains("decision_shift")) {
                for (auto it = jb["decision_shift"].begin(); it != jb["decision_shift"].end(); ++it)
                    e.decision_shift[it.key()] = it.value().get<double>();
            }
            s.bias.entries.push_back(std::move(e));
        }
        validate_bias_config(s.bias);
    }
    return s;
}

Scenario scenario_from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open scenario file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return scenario_from_json_text(ss.str());
}

namespace {

std::size_t pick(Rng& rng, const std::vector<std::pair<std::string, double>>& mix) {
    std::vector<double> w;
    w.reserve(mix.size());
    for (const auto& [_, weight] : mix) w.push_back(weight);
    return rng.categorical(w);
}

struct CaseBias {
    double time_multiplier = 1.0;
    double extra_waste_redo_prob = 0.0;
    const std::map<std::string, double>* decision_shift = nullptr;
};

CaseBias bias_for_case(const BiasConfig& bias, const DemographicProfile& profile, int acuity) {
    CaseBias cb;
    for (const auto& e : bias.entries) {
        if (e.acuity && *e.acuity != acuity) continue;
        if (group_of(profile, e.attribute) != e.group) continue;
        cb.time_multiplier *= e.time_multiplier;
        cb.extra_waste_redo_prob = std::max(cb.extra_waste_redo_prob, e.extra_waste_redo_prob);
        if (!e.decision_shift.empty()) cb.decision_shift = &e.decision_shift;
    }
    return cb;
}

} // namespace

EventLog generate_log(const Scenario& scenario, std::uint64_t seed) {
    validate_bias_config(scenario.bias);
    if (scenario.n_cases < 1) throw ConfigError("n_cases: must be >= 1");

    EventLog log;
    log.provenance.source = "simulator(seed=" + std::to_string(seed) + ")";
    log.extra_columns = {std::string(kAttrRace),      std::string(kAttrAge),    std::string(kAttrGender),
                         std::string(kAttrInsurance), std::string(kAttrLanguage), std::string(kAttrAcuity),
                         std::string(kAttrDisposition)};
    log.cases.reserve(scenario.n_cases);

    // Width of the case-id zero padding keeps lexicographic and numeric order
    // aligned in downstream tools.
    int width = 1;
    for (std::size_t n = scenario.n_cases; n >= 10; n /= 10) ++width;

    for (std::size_t i = 0; i < scenario.n_cases; ++i) {
        Rng rng = Rng::for_stream(seed, i);

        // Sample the raw demographic record.
        RawDemographics raw;
        raw.race = scenario.race_mix[pick(rng, scenario.race_mix)].first;
        raw.language = scenario.language_mix[pick(rng, scenario.language_mix)].first;
        raw.insurance = scenario.insurance_mix[pick(rng, scenario.insurance_mix)].first;
        raw.gender = scenario.gender_mix[pick(rng, scenario.gender_mix)].first;
        const int age = static_cast<int>(rng.uniform_int(scenario.age_min, scenario.age_max));
        raw.age = std::to_string(age);

        // Sample the presentation and triage it.
        PatientPresentation pres;
        pres.life_saving_needed = rng.bernoulli(scenario.life_saving_prob);
        pres.high_risk = rng.bernoulli(scenario.high_risk_prob);
        pres.confused = rng.bernoulli(scenario.confused_prob);
        pres.severe_pain = rng.bernoulli(scenario.severe_pain_prob) ? static_cast<int>(rng.uniform_int(7, 10))
                                                                    : static_cast<int>(rng.uniform_int(0, 6));
        {
            std::vector<double> w;
            w.reserve(scenario.resources_dist.size());
            for (const auto& [_, weight] : scenario.resources_dist) w.push_back(weight);
            pres.expected_resources = scenario.resources_dist[rng.categorical(w)].first;
        }
        if (rng.bernoulli(scenario.danger_vitals_prob)) {
            switch (rng.uniform_int(0, 2)) {
                case 0: pres.vitals.heart_rate = scenario.thresholds.heart_rate_max + rng.uniform() * 40 + 1; break;
                case 1: pres.vitals.respiratory_rate = scenario.thresholds.respiratory_rate_max + rng.uniform() * 15 + 1; break;
                default: pres.vitals.spo2 = scenario.thresholds.spo2_min - rng.uniform() * 10 - 1; break;
            }
        }
        const EsiAssignment esi = assign_esi(pres, scenario.thresholds);
        raw.acuity = std::to_string(esi.level);

        // Mapped profile drives bias-cell matching.
        const DemographicProfile profile = map_demographics(raw, scenario.age_bands);
        const CaseBias cb = bias_for_case(scenario.bias, profile, esi.level);

        // Disposition, possibly shifted by the bias cell.
        if (cb.decision_shift) {
            std::vector<std::pair<std::string, double>> shifted(cb.decision_shift->begin(), cb.decision_shift->end());
            raw.disposition = disposition_for_group(shifted[pick(rng, shifted)].first);
        } else {
            raw.disposition = scenario.disposition_mix[pick(rng, scenario.disposition_mix)].first;
        }

        // Assemble the activity sequence.
        std::vector<std::string> sequence;
        sequence.emplace_back(kEnterEd);
        if (rng.bernoulli(cb.extra_waste_redo_prob)) sequence.emplace_back(kEnterEd); // duplicate entry = waste re-do
        sequence.emplace_back(kTriage);
        const int middle = static_cast<int>(rng.uniform_int(scenario.middle_events_min, scenario.middle_events_max));
        for (int k = 0; k < middle; ++k) sequence.push_back(scenario.middle_mix[pick(rng, scenario.middle_mix)].first);
        sequence.emplace_back(kDischarge);

        // Timestamps: per-acuity log-normal service gaps, scaled by the cell's
        // time multiplier.
        const DurationParams& dp = scenario.durations[static_cast<std::size_t>(esi.level)];
        Case c;
        {
            std::ostringstream id;
            id << "c";
            id.width(width);
            id.fill('0');
            id << i;
            c.case_id = id.str();
        }
        std::int64_t t = scenario.start_time + static_cast<std::int64_t>(i) * scenario.case_spacing_seconds;
        c.events.reserve(sequence.size());
        for (std::size_t e = 0; e < sequence.size(); ++e) {
            Event ev;
            ev.case_id = c.case_id;
            ev.activity = sequence[e];
            ev.timestamp = t;
            if (e == 0) {
                ev.set_extra(kAttrRace, raw.race);
                ev.set_extra(kAttrAge, raw.age);
                ev.set_extra(kAttrGender, raw.gender);
                ev.set_extra(kAttrInsurance, raw.insurance);
                ev.set_extra(kAttrLanguage, raw.language);
            }
            if (ev.activity == kTriage) ev.set_extra(kAttrAcuity, raw.acuity);
            if (ev.activity == kDischarge) ev.set_extra(kAttrDisposition, raw.disposition);
            c.events.push_back(std::move(ev));
            if (e + 1 < sequence.size()) {
                double gap = rng.lognormal(dp.mu, dp.sigma) * cb.time_multiplier;
                if (gap < 1) gap = 1;
                t += static_cast<std::int64_t>(gap);
            }
        }
        log.cases.push_back(std::move(c));
    }
    log.provenance.case_count = log.cases.size();
    log.provenance.row_count = log.event_count();
    return log;
}

EventLog generate_log(std::size_t n_cases, const BiasConfig& bias, std::uint64_t seed) {
    Scenario s;
    s.n_cases = n_cases;
    s.bias = bias;
    return generate_log(s, seed);
}

} // namespace fairlens
