#include "fairlens/report.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include <json.hpp>

#include "fairlens/errors.hpp"

namespace fairlens {

std::string_view to_string(Justice j) {
    switch (j) {
        case Justice::Distributive: return "Distributive";
        case Justice::Procedural: return "Procedural";
        case Justice::Interactional: return "Interactional";
    }
    return "?";
}

std::vector<Justice> justice_dimensions_of(OutcomeKind outcome) {
    switch (outcome) {
        case OutcomeKind::Decision: return {Justice::Distributive};
        case OutcomeKind::Time: return {Justice::Procedural};
        case OutcomeKind::Deviation: return {Justice::Procedural};
        case OutcomeKind::Redo: return {Justice::Procedural, Justice::Interactional};
    }
    return {};
}

JusticeSummary map_to_justice(const std::vector<StatTestResult>& results, const JusticeOptions& options) {
    JusticeSummary summary;

    constexpr Justice kJustices[] = {Justice::Distributive, Justice::Procedural, Justice::Interactional};
    constexpr OutcomeKind kOutcomeOrder[] = {OutcomeKind::Decision, OutcomeKind::Time, OutcomeKind::Deviation,
                                             OutcomeKind::Redo};

    for (const auto justice : kJustices) {
        for (const auto outcome : kOutcomeOrder) {
            const auto dims = justice_dimensions_of(outcome);
            if (std::find(dims.begin(), dims.end(), justice) == dims.end()) continue;

            JusticeEntry entry;
            entry.justice = justice;
            entry.outcome = outcome;
            std::map<SensitiveAttribute, Interpretation> attr_max;
            bool any = false;

            for (const auto& r : results) {
                if (r.outcome != outcome || !r.tested || !r.significant || !*r.significant) continue;
                const Interpretation floor =
                    r.test == TestKind::ChiSquare ? options.v_floor : options.epsilon_floor;
                if (*r.interpretation < floor) continue;
                if (justice == Justice::Interactional &&
                    std::find(options.interactional_attributes.begin(), options.interactional_attributes.end(),
                              r.attribute) == options.interactional_attributes.end())
                    continue;
                if (!any) {
                    entry.effect_min = *r.interpretation;
                    entry.effect_max = *r.interpretation;
                    any = true;
                } else {
                    entry.effect_min = std::min(entry.effect_min, *r.interpretation);
                    entry.effect_max = std::max(entry.effect_max, *r.interpretation);
                }
                entry.acuity_levels.insert(r.acuity);
                auto [it, inserted] = attr_max.try_emplace(r.attribute, *r.interpretation);
                if (!inserted) it->second = std::max(it->second, *r.interpretation);
            }
            if (!any) continue;
            for (const auto& [attr, _] : attr_max) entry.key_attributes.push_back(attr);
            summary.entries.push_back(std::move(entry));
        }
    }
    return summary;
}

namespace {

using nlohmann::json;

std::string effect_label(const StatTestResult& r, VConvention primary) {
    std::string label(to_string(*r.interpretation));
    if (r.test == TestKind::ChiSquare) {
        const auto alt_convention =
            primary == VConvention::TableBands ? VConvention::ProseAnchors : VConvention::TableBands;
        const auto alt = interpret_effect(EffectKind::CramersV, *r.effect, alt_convention);
        if (alt != *r.interpretation) {
            label += " (";
            label += primary == VConvention::TableBands ? "prose: " : "table: ";
            label += to_string(alt);
            label += ")";
        }
    }
    return label;
}

std::string format_effect(double v) {
    std::ostringstream out;
    out.setf(std::ios::fixed);
    out.precision(4);
    out << v;
    return out.str();
}

std::string render_markdown(const std::vector<StatTestResult>& results, const JusticeSummary& summary,
                            const RenderOptions& options) {
    std::ostringstream out;
    out << "# Triage fairness report\n";
    constexpr OutcomeKind kOrder[] = {OutcomeKind::Time, OutcomeKind::Redo, OutcomeKind::Deviation,
                                      OutcomeKind::Decision};
    for (const auto outcome : kOrder) {
        out << "\n## " << to_string(outcome)
            << (outcome == OutcomeKind::Decision ? " (chi-square, Cramer's V)" : " (Kruskal-Wallis, epsilon-squared)")
            << "\n\n";
        out << "| Acuity | Attribute | p-value | Effect | Significant | Interpretation |\n";
        out << "|---|---|---|---|---|---|\n";
        for (const auto& r : results) {
            if (r.outcome != outcome) continue;
            out << "| " << r.acuity << " | " << to_string(r.attribute) << " | ";
            if (!r.tested) {
                out << "-- | -- | -- | Not tested |\n";
                continue;
            }
            out << format_p_value(*r.p_value) << " | " << format_effect(*r.effect) << " | "
                << (*r.significant ? "Yes" : "No") << " | " << effect_label(r, options.v_convention) << " |\n";
        }
    }

    out << "\n## Justice dimensions\n\n";
    if (summary.entries.empty()) {
        out << "No significant disparities above the effect floor.\n";
        return out.str();
    }
    out << "| Justice | Outcome | Acuity levels | Key attributes | Effect range |\n";
    out << "|---|---|---|---|---|\n";
    for (const auto& e : summary.entries) {
        out << "| " << to_string(e.justice) << " | " << to_string(e.outcome) << " | ";
        bool first = true;
        for (const int a : e.acuity_levels) {
            if (!first) out << ", ";
            out << a;
            first = false;
        }
        out << " | ";
        first = true;
        for (const auto attr : e.key_attributes) {
            if (!first) out << ", ";
            out << to_string(attr);
            first = false;
        }
        out << " | " << to_string(e.effect_min);
        if (e.effect_max != e.effect_min) out << "-" << to_string(e.effect_max);
        out << " |\n";
    }
    return out.str();
}

json result_to_json(const StatTestResult& r, const RenderOptions& options) {
    json j;
    j["outcome"] = to_string(r.outcome);
    j["attribute"] = to_string(r.attribute);
    j["acuity"] = r.acuity;
    j["test"] = to_string(r.test);
    j["tested"] = r.tested;
    if (r.tested) {
        j["statistic"] = *r.statistic;
        j["df"] = *r.df;
        j["p_value"] = *r.p_value;
        j["effect"] = *r.effect;
        j["significant"] = *r.significant;
        j["interpretation"] = to_string(*r.interpretation);
        if (r.test == TestKind::ChiSquare) {
            const auto alt_convention = options.v_convention == VConvention::TableBands ? VConvention::ProseAnchors
                                                                                        : VConvention::TableBands;
            j["interpretation_alt"] = to_string(interpret_effect(EffectKind::CramersV, *r.effect, alt_convention));
        }
    }
    json sizes = json::object();
    for (const auto& [label, n] : r.group_sizes) sizes[label] = n;
    j["group_sizes"] = std::move(sizes);
    return j;
}

std::string render_json(const std::vector<StatTestResult>& results, const JusticeSummary& summary,
                        const RenderOptions& options) {
    json j;
    auto arr = json::array();
    for (const auto& r : results) arr.push_back(result_to_json(r, options));
    j["results"] = std::move(arr);
    auto js = json::array();
    for (const auto& e : summary.entries) {
        json je;
        je["justice"] = to_string(e.justice);
        je["outcome"] = to_string(e.outcome);
        je["acuity_levels"] = e.acuity_levels;
        auto attrs = json::array();
        for (const auto a : e.key_attributes) attrs.push_back(to_string(a));
        je["key_attributes"] = std::move(attrs);
        je["effect_range"] = {to_string(e.effect_min), to_string(e.effect_max)};
        js.push_back(std::move(je));
    }
    j["justice_summary"] = std::move(js);
    return j.dump(2);
}

std::string render_csv(const std::vector<StatTestResult>& results) {
    std::ostringstream out;
    out << "outcome,attribute,acuity,test,tested,statistic,df,p_value,effect,significant,interpretation,group_sizes\n";
    for (const auto& r : results) {
        out << to_string(r.outcome) << ',' << to_string(r.attribute) << ',' << r.acuity << ',' << to_string(r.test)
            << ',' << (r.tested ? "true" : "false") << ',';
        if (r.tested) {
            out.precision(17);
            out << *r.statistic << ',' << *r.df << ',' << *r.p_value << ',' << *r.effect << ','
                << (*r.significant ? "true" : "false") << ',' << to_string(*r.interpretation) << ',';
        } else {
            out << ",,,,,Not tested,";
        }
        out << '"';
        bool first = true;
        for (const auto& [label, n] : r.group_sizes) {
            if (!first) out << ';';
            out << label << '=' << n;
            first = false;
        }
        out << "\"\n";
    }
    return out.str();
}

} // namespace

std::string render_report(const std::vector<StatTestResult>& results, const JusticeSummary& summary,
                          ReportFormat format, const RenderOptions& options) {
    switch (format) {
        case ReportFormat::Markdown: return render_markdown(results, summary, options);
        case ReportFormat::Json: return render_json(results, summary, options);
        case ReportFormat::Csv: return render_csv(results);
    }
    throw ConfigError("format: unknown report format");
}

ReportFormat report_format_from_string(const std::string& name) {
    if (name == "md" || name == "markdown") return ReportFormat::Markdown;
    if (name == "json") return ReportFormat::Json;
    if (name == "csv") return ReportFormat::Csv;
    throw ConfigError("format: expected md, json, or csv, got '" + name + "'");
}

std::vector<StatTestResult> results_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(std::string("results: invalid JSON: ") + e.what());
    }
    std::vector<StatTestResult> out;
    for (const auto& jr : j.at("results")) {
        StatTestResult r;
        const auto outcome = outcome_from_string(jr.at("outcome").get<std::string>());
        const auto attribute = attribute_from_string(jr.at("attribute").get<std::string>());
        if (!outcome || !attribute) throw InputError("results: unknown outcome or attribute label");
        r.outcome = *outcome;
        r.attribute = *attribute;
        r.acuity = jr.at("acuity").get<int>();
        r.test = jr.at("test").get<std::string>() == "ChiSquare" ? TestKind::ChiSquare : TestKind::KruskalWallis;
        r.tested = jr.at("tested").get<bool>();
        if (r.tested) {
            r.statistic = jr.at("statistic").get<double>();
            r.df = jr.at("df").get<int>();
            r.p_value = jr.at("p_value").get<double>();
            r.effect = jr.at("effect").get<double>();
            r.significant = jr.at("significant").get<bool>();
            const auto interp = interpretation_from_string(jr.at("interpretation").get<std::string>());
            if (!interp) throw InputError("results: unknown interpretation label");
            r.interpretation = *interp;
        }
        for (auto it = jr.at("group_sizes").begin(); it != jr.at("group_sizes").end(); ++it)
            r.group_sizes.emplace_back(it.key(), it.value().get<std::size_t>());
        out.push_back(std::move(r));
    }
    return out;
}

} // namespace fairlens
