#include "fairlens/eventlog.hpp"

#include <algorithm>
#include <fstream>
#include <unordered_map>

#include "fairlens/csv.hpp"
#include "fairlens/errors.hpp"
#include "fairlens/timefmt.hpp"

namespace fairlens {

const std::string* Event::find_extra(std::string_view key) const {
    for (const auto& [k, v] : extra)
        if (k == key) return &v;
    return nullptr;
}

void Event::set_extra(std::string_view key, std::string_view value) {
    for (auto& [k, v] : extra) {
        if (k == key) {
            v = std::string(value);
            return;
        }
    }
    extra.emplace_back(std::string(key), std::string(value));
}

std::size_t EventLog::event_count() const {
    std::size_t n = 0;
    for (const auto& c : cases) n += c.events.size();
    return n;
}

namespace {

constexpr std::string_view kAttributeKeys[] = {kAttrRace, kAttrAge, kAttrGender, kAttrInsurance,
                                               kAttrLanguage, kAttrAcuity, kAttrDisposition};

int find_column(const std::vector<std::string>& header, const std::string& name) {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return static_cast<int>(i);
    return -1;
}

} // namespace

EventLog load_log(std::istream& in, const LoadOptions& options) {
    CsvReader reader(in, options.delimiter);
    std::vector<std::string> header;
    if (!reader.next(header)) throw InputError("empty input: no header row");

    const auto& cm = options.columns;
    const int col_case = find_column(header, cm.case_id);
    const int col_activity = find_column(header, cm.activity);
    const int col_timestamp = find_column(header, cm.timestamp);
    if (col_case < 0) throw ConfigError("column_map.case_id: column '" + cm.case_id + "' not in header");
    if (col_activity < 0) throw ConfigError("column_map.activity: column '" + cm.activity + "' not in header");
    if (col_timestamp < 0) throw ConfigError("column_map.timestamp: column '" + cm.timestamp + "' not in header");

    // Attribute columns are optional unless explicitly mapped to a name that
    // is missing from the header.
    struct AttrCol {
        std::string_view key;
        int index;
    };
    std::vector<AttrCol> attr_cols;
    const std::pair<std::string_view, const std::string*> mapped[] = {
        {kAttrRace, &cm.race},         {kAttrAge, &cm.age},       {kAttrGender, &cm.gender},
        {kAttrInsurance, &cm.insurance}, {kAttrLanguage, &cm.language}, {kAttrAcuity, &cm.acuity},
        {kAttrDisposition, &cm.disposition}};
    std::vector<bool> consumed(header.size(), false);
    consumed[static_cast<std::size_t>(col_case)] = true;
    consumed[static_cast<std::size_t>(col_activity)] = true;
    consumed[static_cast<std::size_t>(col_timestamp)] = true;
    for (const auto& [key, name] : mapped) {
        if (name->empty()) continue;
        const int idx = find_column(header, *name);
        if (idx < 0) continue; // attribute columns may be absent
        attr_cols.push_back({key, idx});
        consumed[static_cast<std::size_t>(idx)] = true;
    }

    // Everything else is preserved under its original header name.
    std::vector<std::pair<std::string, int>> passthrough;
    for (std::size_t i = 0; i < header.size(); ++i)
        if (!consumed[i]) passthrough.emplace_back(header[i], static_cast<int>(i));

    EventLog log;
    log.provenance.source = options.source_name;
    for (const auto& ac : attr_cols) log.extra_columns.emplace_back(ac.key);
    for (const auto& [name, idx] : passthrough) log.extra_columns.push_back(name);

    std::unordered_map<std::string, std::size_t> case_index;
    std::vector<std::string> fields;
    std::vector<std::vector<std::pair<Event, std::size_t>>> staged; // per case: (event, file order)
    std::size_t file_order = 0;
    while (reader.next(fields)) {
        ++log.provenance.row_count;
        const auto get = [&fields](int idx) -> std::string_view {
            return idx >= 0 && static_cast<std::size_t>(idx) < fields.size() ? std::string_view(fields[static_cast<std::size_t>(idx)])
                                                                             : std::string_view();
        };
        const std::string_view case_id = get(col_case);
        const auto ts = parse_timestamp(get(col_timestamp), options.timestamp_format);
        if (case_id.empty() || !ts || get(col_activity).empty()) {
            ++log.provenance.rejected_rows;
            continue;
        }
        Event ev;
        ev.case_id = std::string(case_id);
        ev.activity = std::string(get(col_activity));
        ev.timestamp = *ts;
        for (const auto& ac : attr_cols) {
            const auto v = get(ac.index);
            if (!v.empty()) ev.extra.emplace_back(std::string(ac.key), std::string(v));
        }
        for (const auto& [name, idx] : passthrough) {
            const auto v = get(idx);
            if (!v.empty()) ev.extra.emplace_back(name, std::string(v));
        }
        auto [it, inserted] = case_index.try_emplace(ev.case_id, staged.size());
        if (inserted) staged.emplace_back();
        staged[it->second].emplace_back(std::move(ev), file_order++);
    }

    if (log.provenance.row_count == log.provenance.rejected_rows)
        throw InputError("no valid rows in '" + options.source_name + "'");

    log.cases.reserve(staged.size());
    for (auto& bucket : staged) {
        std::sort(bucket.begin(), bucket.end(), [](const auto& a, const auto& b) {
            if (a.first.timestamp != b.first.timestamp) return a.first.timestamp < b.first.timestamp;
            return a.second < b.second;
        });
        Case c;
        c.case_id = bucket.front().first.case_id;
        c.events.reserve(bucket.size());
        for (auto& [ev, order] : bucket) c.events.push_back(std::move(ev));
        log.cases.push_back(std::move(c));
    }
    log.provenance.case_count = log.cases.size();
    log.provenance.row_count -= log.provenance.rejected_rows; // loaded rows only
    return log;
}

EventLog load_log_file(const std::string& path, LoadOptions options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open log file '" + path + "'");
    if (options.source_name == "<stream>") options.source_name = path;
    return load_log(in, options);
}

void write_log(std::ostream& out, const EventLog& log, const std::string& timestamp_format, char delimiter) {
    std::vector<std::string> fields;
    fields.reserve(3 + log.extra_columns.size());
    fields = {"case_id", "activity", "timestamp"};
    for (const auto& c : log.extra_columns) fields.push_back(c);
    write_csv_record(out, fields, delimiter);

    for (const auto& c : log.cases) {
        for (const auto& ev : c.events) {
            fields.clear();
            fields.push_back(ev.case_id);
            fields.push_back(ev.activity);
            fields.push_back(format_timestamp(ev.timestamp, timestamp_format));
            for (const auto& col : log.extra_columns) {
                const std::string* v = ev.find_extra(col);
                fields.push_back(v ? *v : std::string());
            }
            write_csv_record(out, fields, delimiter);
        }
    }
}

void write_log_file(const std::string& path, const EventLog& log, const std::string& timestamp_format, char delimiter) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot open output file '" + path + "'");
    write_log(out, log, timestamp_format, delimiter);
}

EventLog impute_case_attributes(EventLog log) {
    constexpr std::string_view imputed_keys[] = {kAttrRace, kAttrAge, kAttrGender,
                                                 kAttrInsurance, kAttrLanguage, kAttrDisposition};
    for (auto& c : log.cases) {
        for (const auto key : imputed_keys) {
            const std::string* first = nullptr;
            bool conflict = false;
            for (const auto& ev : c.events) {
                if (const std::string* v = ev.find_extra(key)) {
                    if (!first)
                        first = v;
                    else if (*v != *first)
                        conflict = true;
                }
            }
            if (!first) continue;
            const std::string value = *first; // copy before rewriting events
            if (conflict) ++log.provenance.attribute_conflicts;
            for (auto& ev : c.events) ev.set_extra(key, value);
        }
    }
    return log;
}

EventLog map_log_demographics(EventLog log, const AgeBands& bands) {
    MappingCounters counters;
    std::vector<Case> kept;
    kept.reserve(log.cases.size());
    for (auto& c : log.cases) {
        RawDemographics raw;
        const auto grab = [&c](std::string_view key) -> std::string {
            for (const auto& ev : c.events)
                if (const std::string* v = ev.find_extra(key)) return *v;
            return {};
        };
        raw.race = grab(kAttrRace);
        raw.age = grab(kAttrAge);
        raw.gender = grab(kAttrGender);
        raw.insurance = grab(kAttrInsurance);
        raw.language = grab(kAttrLanguage);
        raw.acuity = grab(kAttrAcuity); // earliest recorded acuity = initial ESI level
        raw.disposition = grab(kAttrDisposition);
        try {
            c.profile = map_demographics(raw, bands, &counters);
        } catch (const InputError&) {
            ++log.provenance.invalid_profiles;
            continue;
        }
        kept.push_back(std::move(c));
    }
    log.cases = std::move(kept);
    log.provenance.case_count = log.cases.size();
    log.provenance.row_count = log.event_count();
    log.provenance.unmapped_categories += counters.total();
    return log;
}

EventLog filter_for_analysis(EventLog log) {
    std::vector<Case> kept;
    kept.reserve(log.cases.size());
    std::size_t removed = 0;
    for (auto& c : log.cases) {
        if (c.profile && c.profile->race_group == RaceGroup::Deleted) {
            ++removed;
            continue;
        }
        kept.push_back(std::move(c));
    }
    log.cases = std::move(kept);
    log.provenance.case_count = log.cases.size();
    log.provenance.removed_cases += removed;
    log.provenance.row_count = log.event_count();
    return log;
}

} // namespace fairlens
