#include "fairlens/outcomes.hpp"

#include <cctype>
#include <ostream>
#include <unordered_map>

#include "fairlens/errors.hpp"

namespace fairlens {

std::string_view to_string(DecisionGroup g) {
    switch (g) {
        case DecisionGroup::Home: return "HOME";
        case DecisionGroup::Facility: return "FACILITY";
        case DecisionGroup::Death: return "DEATH";
        case DecisionGroup::AgainstAdvice: return "AGAINST_ADVICE";
        case DecisionGroup::Unknown: return "UNKNOWN";
    }
    return "?";
}

namespace {

std::string upper_trim(std::string_view raw) {
    std::size_t b = 0, e = raw.size();
    while (b < e && std::isspace(static_cast<unsigned char>(raw[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(raw[e - 1]))) --e;
    std::string out;
    out.reserve(e - b);
    for (std::size_t i = b; i < e; ++i) out.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(raw[i]))));
    return out;
}

const std::unordered_map<std::string, DecisionGroup>& discharge_table() {
    static const std::unordered_map<std::string, DecisionGroup> table = {
        {"UNKNOWN", DecisionGroup::Unknown},
        {"HOME", DecisionGroup::Home},
        {"HOME HEALTH CARE", DecisionGroup::Home},
        {"SKILLED NURSING FACILITY", DecisionGroup::Facility},
        {"REHAB", DecisionGroup::Facility},
        {"DIED", DecisionGroup::Death},
        {"CHRONIC/LONG TERM ACUTE CARE", DecisionGroup::Facility},
        {"HOSPICE", DecisionGroup::Death},
        {"AGAINST ADVICE", DecisionGroup::AgainstAdvice},
        {"PSYCH FACILITY", DecisionGroup::Facility},
        {"OTHER FACILITY", DecisionGroup::Facility},
        {"ACUTE HOSPITAL", DecisionGroup::Facility},
        {"ASSISTED LIVING", DecisionGroup::Facility},
        {"HEALTHCARE FACILITY", DecisionGroup::Facility},
    };
    return table;
}

std::optional<int> event_acuity(const Event& ev) {
    const std::string* v = ev.find_extra(kAttrAcuity);
    if (!v || v->empty()) return std::nullopt;
    int value = 0;
    for (const char ch : *v) {
        if (!std::isdigit(static_cast<unsigned char>(ch))) return std::nullopt;
        value = value * 10 + (ch - '0');
        if (value > 99) return std::nullopt;
    }
    return value;
}

} // namespace

DecisionGroup decision_group(std::string_view disposition_raw, std::size_t* unlisted) {
    const auto& t = discharge_table();
    auto it = t.find(upper_trim(disposition_raw));
    if (it != t.end()) return it->second;
    if (unlisted) ++*unlisted;
    return DecisionGroup::Unknown;
}

std::int64_t case_duration(const Case& c) {
    if (c.events.empty()) throw InputError("cannot measure duration of empty case '" + c.case_id + "'");
    return c.events.back().timestamp - c.events.front().timestamp;
}

RedoBreakdown classify_redos(const Case& c, std::int64_t gap_threshold_minutes) {
    RedoBreakdown r;
    const std::int64_t gap_threshold = gap_threshold_minutes * 60;
    std::unordered_map<std::string_view, std::int64_t> seen;
    const Event* prev_triage = nullptr;
    for (const auto& ev : c.events) {
        const std::int64_t occurrence = ++seen[ev.activity];
        if (ev.activity == kTriage) {
            if (occurrence > 1) {
                ++r.total_redos;
                const auto prev_acuity = event_acuity(*prev_triage);
                const auto this_acuity = event_acuity(ev);
                const bool acuity_changed = prev_acuity && this_acuity && *prev_acuity != *this_acuity;
                const bool gap_exceeded = ev.timestamp - prev_triage->timestamp > gap_threshold;
                if (acuity_changed && gap_exceeded)
                    ++r.clinical_redos;
                else
                    ++r.waste_redos;
            }
            prev_triage = &ev;
            continue;
        }
        if (occurrence == 1) continue;
        ++r.total_redos;
        if (ev.activity == kEnterEd || ev.activity == kDischarge)
            ++r.waste_redos;
        else
            ++r.clinical_redos; // vitals, medicine, and unmodeled activities
    }
    if (!c.events.empty()) r.waste_pct = static_cast<double>(r.waste_redos) / static_cast<double>(c.events.size());
    return r;
}

std::vector<CaseOutcomes> extract_outcomes(const EventLog& log, const ProcessNet& net, const ExtractOptions& options) {
    const auto scores = deviation_scores(net, log);
    std::vector<CaseOutcomes> out;
    out.reserve(log.cases.size());
    for (const auto& c : log.cases) {
        CaseOutcomes o;
        o.case_id = c.case_id;
        o.duration_seconds = case_duration(c);
        o.redo = classify_redos(c, options.gap_threshold_minutes);
        o.fitness = scores.at(c.case_id).fitness;
        if (c.profile) {
            o.profile = *c.profile;
            o.acuity = c.profile->acuity;
            o.decision = decision_group(c.profile->disposition_raw);
        }
        out.push_back(std::move(o));
    }
    return out;
}

void write_outcomes_csv(std::ostream& out, const std::vector<CaseOutcomes>& outcomes) {
    out << "case_id,duration_seconds,total_redos,clinical_redos,waste_redos,waste_pct,fitness,decision_group,"
           "acuity,race_group,age_group,age_years,gender,insurance_group,language_group\n";
    for (const auto& o : outcomes) {
        out << o.case_id << ',' << o.duration_seconds << ',' << o.redo.total_redos << ',' << o.redo.clinical_redos
            << ',' << o.redo.waste_redos << ',' << o.redo.waste_pct << ',' << o.fitness << ',' << to_string(o.decision)
            << ',';
        if (o.acuity) out << *o.acuity;
        out << ',' << to_string(o.profile.race_group) << ',' << to_string(o.profile.age_group) << ','
            << o.profile.age_years << ',' << to_string(o.profile.gender) << ',' << to_string(o.profile.insurance_group)
            << ',' << to_string(o.profile.language_group) << '\n';
    }
}

} // namespace fairlens
