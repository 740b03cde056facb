#include "fairlens/conformance.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <vector>

#include "fairlens/errors.hpp"

namespace fairlens {

ReplayResult replay_case(const ProcessNet& net, const Case& c) {
    if (c.events.empty()) throw InputError("cannot replay empty case '" + c.case_id + "'");

    std::vector<std::int64_t> marking(net.places.size(), 0);
    ReplayResult r;

    // Environment start token.
    marking[static_cast<std::size_t>(net.source_place)] += 1;
    r.produced += 1;

    for (const auto& ev : c.events) {
        const int t = net.transition_of(ev.activity);
        if (t < 0) {
            // Unknown activity: consumes one token that has to be created on
            // the fly, produces nothing.
            r.consumed += 1;
            r.missing += 1;
            r.unknown_events += 1;
            continue;
        }
        for (const int p : net.transition_inputs[static_cast<std::size_t>(t)]) {
            r.consumed += 1;
            auto& tokens = marking[static_cast<std::size_t>(p)];
            if (tokens > 0)
                tokens -= 1;
            else
                r.missing += 1;
        }
        for (const int p : net.transition_outputs[static_cast<std::size_t>(t)]) {
            r.produced += 1;
            marking[static_cast<std::size_t>(p)] += 1;
        }
    }

    // Environment consumes the completion token from the sink.
    r.consumed += 1;
    auto& sink = marking[static_cast<std::size_t>(net.sink_place)];
    if (sink > 0)
        sink -= 1;
    else
        r.missing += 1;

    for (const auto tokens : marking) r.remaining += tokens;

    const double miss_part = r.consumed > 0 ? 1.0 - static_cast<double>(r.missing) / static_cast<double>(r.consumed) : 0.0;
    const double rem_part = r.produced > 0 ? 1.0 - static_cast<double>(r.remaining) / static_cast<double>(r.produced) : 0.0;
    r.fitness = 0.5 * miss_part + 0.5 * rem_part;
    return r;
}

std::unordered_map<std::string, ReplayResult> deviation_scores(const ProcessNet& net, const EventLog& log) {
    std::unordered_map<std::string, ReplayResult> out;
    out.reserve(log.cases.size());
    for (const auto& c : log.cases) {
        if (c.events.empty()) continue; // ill-formed case; never abort the batch
        out.emplace(c.case_id, replay_case(net, c));
    }
    return out;
}

void write_replay_csv(std::ostream& out, const std::unordered_map<std::string, ReplayResult>& scores) {
    out << "case_id,produced,consumed,missing,remaining,fitness\n";
    std::map<std::string, const ReplayResult*> sorted;
    for (const auto& [id, r] : scores) sorted.emplace(id, &r);
    for (const auto& [id, r] : sorted) {
        out << id << ',' << r->produced << ',' << r->consumed << ',' << r->missing << ',' << r->remaining << ','
            << r->fitness << '\n';
    }
}

} // namespace fairlens
