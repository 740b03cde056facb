#ifndef FAIRLENS_DISCOVERY_HPP_
#define FAIRLENS_DISCOVERY_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "fairlens/eventlog.hpp"

namespace fairlens {

// Directly-follows statistics of a log: |a>b| counts plus start/end activity
// frequencies. Total count equals sum over cases of (events - 1).
struct DirectlyFollows {
    std::map<std::pair<std::string, std::string>, std::int64_t> counts;
    std::vector<std::string> activities; // sorted, unique
    std::map<std::string, std::int64_t> start_counts;
    std::map<std::string, std::int64_t> end_counts;

    std::int64_t count(const std::string& a, const std::string& b) const;
    // Associative merge; counting parallelizes over case shards.
    void merge(const DirectlyFollows& other);
};

DirectlyFollows count_directly_follows(const EventLog& log);

// Weijters dependency measure: (|a>b| - |b>a|) / (|a>b| + |b>a| + 1) for
// a != b, and |a>a| / (|a>a| + 1) for the self-loop form.
double dependency_measure(const DirectlyFollows& df, const std::string& a, const std::string& b);

struct DependencyEdge {
    std::string from;
    std::string to;
    double dependency = 0;

    bool operator==(const DependencyEdge&) const = default;
};

struct DependencyGraph {
    std::vector<std::string> activities;
    std::vector<DependencyEdge> edges;
    std::vector<std::string> start_activities;
    std::vector<std::string> end_activities;
    double threshold = 0.8;

    bool has_edge(const std::string& from, const std::string& to) const;
};

// Keeps edges whose dependency reaches the threshold, then repairs
// connectivity: every non-start activity gets its best-scoring incoming edge
// and every non-end activity its best-scoring outgoing edge, so no transition
// is dead at replay time.
DependencyGraph mine_dependency_graph(const DirectlyFollows& df, double threshold = 0.8);

// Place/transition net for token replay. One transition per activity, one
// place per dependency edge, AND semantics on joins and splits, plus a
// distinguished source place feeding start activities and sink place fed by
// end activities.
struct ProcessNet {
    std::vector<std::string> transitions;
    std::vector<std::string> places;
    int source_place = -1;
    int sink_place = -1;
    std::vector<std::vector<int>> transition_inputs;  // place indices per transition
    std::vector<std::vector<int>> transition_outputs;
    std::unordered_map<std::string, int> transition_index;

    int transition_of(const std::string& activity) const;
};

// Throws StructuralError if some transition is unreachable from the source.
ProcessNet to_process_net(const DependencyGraph& g);

std::string net_to_json(const ProcessNet& net);
ProcessNet net_from_json(const std::string& text);
std::string net_to_dot(const ProcessNet& net);

} // namespace fairlens

#endif
