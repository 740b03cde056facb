#ifndef FAIRLENS_CONFORMANCE_HPP_
#define FAIRLENS_CONFORMANCE_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <unordered_map>

#include "fairlens/discovery.hpp"
#include "fairlens/eventlog.hpp"

namespace fairlens {

// Token-replay counters for one case. fitness = (1 - m/c)/2 + (1 - r/p)/2.
struct ReplayResult {
    std::int64_t produced = 0;
    std::int64_t consumed = 0;
    std::int64_t missing = 0;
    std::int64_t remaining = 0;
    double fitness = 0;
    std::int64_t unknown_events = 0; // activities absent from the net, flagged not fatal

    bool operator==(const ReplayResult&) const = default;
};

// Replays one case: the environment produces a token in the source place and
// consumes one from the sink at the end; every event fires its transition,
// creating missing tokens on the fly for empty input places. Tokens left
// anywhere except the consumed sink token count as remaining. Throws
// InputError for an empty case.
ReplayResult replay_case(const ProcessNet& net, const Case& c);

// Per-case fitness for the whole log; unknown activities are flagged in the
// per-case result, never abort the batch.
std::unordered_map<std::string, ReplayResult> deviation_scores(const ProcessNet& net, const EventLog& log);

// CSV export: case_id,produced,consumed,missing,remaining,fitness.
void write_replay_csv(std::ostream& out, const std::unordered_map<std::string, ReplayResult>& scores);

} // namespace fairlens

#endif
