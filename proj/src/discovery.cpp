#include "fairlens/discovery.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>

#include <json.hpp>

#include "fairlens/errors.hpp"

namespace fairlens {

std::int64_t DirectlyFollows::count(const std::string& a, const std::string& b) const {
    auto it = counts.find({a, b});
    return it == counts.end() ? 0 : it->second;
}

void DirectlyFollows::merge(const DirectlyFollows& other) {
    for (const auto& [k, v] : other.counts) counts[k] += v;
    for (const auto& [k, v] : other.start_counts) start_counts[k] += v;
    for (const auto& [k, v] : other.end_counts) end_counts[k] += v;
    std::vector<std::string> merged;
    merged.reserve(activities.size() + other.activities.size());
    std::set_union(activities.begin(), activities.end(), other.activities.begin(), other.activities.end(),
                   std::back_inserter(merged));
    activities = std::move(merged);
}

DirectlyFollows count_directly_follows(const EventLog& log) {
    if (log.cases.empty()) throw InputError("cannot count directly-follows relation of an empty log");
    DirectlyFollows df;
    std::set<std::string> acts;
    for (const auto& c : log.cases) {
        if (c.events.empty()) continue;
        ++df.start_counts[c.events.front().activity];
        ++df.end_counts[c.events.back().activity];
        for (std::size_t i = 0; i < c.events.size(); ++i) {
            acts.insert(c.events[i].activity);
            if (i + 1 < c.events.size()) ++df.counts[{c.events[i].activity, c.events[i + 1].activity}];
        }
    }
    df.activities.assign(acts.begin(), acts.end());
    return df;
}

double dependency_measure(const DirectlyFollows& df, const std::string& a, const std::string& b) {
    if (a == b) {
        const double self = static_cast<double>(df.count(a, a));
        return self / (self + 1.0);
    }
    const double ab = static_cast<double>(df.count(a, b));
    const double ba = static_cast<double>(df.count(b, a));
    return (ab - ba) / (ab + ba + 1.0);
}

bool DependencyGraph::has_edge(const std::string& from, const std::string& to) const {
    for (const auto& e : edges)
        if (e.from == from && e.to == to) return true;
    return false;
}

DependencyGraph mine_dependency_graph(const DirectlyFollows& df, double threshold) {
    if (threshold < 0 || threshold > 1) throw ConfigError("tau: dependency threshold must be in [0,1]");
    DependencyGraph g;
    g.threshold = threshold;
    g.activities = df.activities;
    for (const auto& [a, n] : df.start_counts)
        if (n > 0) g.start_activities.push_back(a);
    for (const auto& [a, n] : df.end_counts)
        if (n > 0) g.end_activities.push_back(a);

    for (const auto& a : g.activities) {
        for (const auto& b : g.activities) {
            if (df.count(a, b) <= 0) continue; // only observed pairs become edges
            const double dep = dependency_measure(df, a, b);
            if (dep >= threshold) g.edges.push_back({a, b, dep});
        }
    }

    // Connectivity repair: any event is either first in its case or observed
    // after some predecessor, so a best candidate always exists.
    const auto is_start = [&g](const std::string& a) {
        return std::find(g.start_activities.begin(), g.start_activities.end(), a) != g.start_activities.end();
    };
    const auto is_end = [&g](const std::string& a) {
        return std::find(g.end_activities.begin(), g.end_activities.end(), a) != g.end_activities.end();
    };
    for (const auto& act : g.activities) {
        bool has_in = false, has_out = false;
        for (const auto& e : g.edges) {
            if (e.to == act && e.from != act) has_in = true;
            if (e.from == act && e.to != act) has_out = true;
        }
        if (!has_in && !is_start(act)) {
            std::string best;
            double best_dep = -2;
            for (const auto& a : g.activities) {
                if (a == act || df.count(a, act) <= 0) continue;
                const double dep = dependency_measure(df, a, act);
                if (dep > best_dep) {
                    best_dep = dep;
                    best = a;
                }
            }
            if (!best.empty() && !g.has_edge(best, act)) g.edges.push_back({best, act, best_dep});
        }
        if (!has_out && !is_end(act)) {
            std::string best;
            double best_dep = -2;
            for (const auto& b : g.activities) {
                if (b == act || df.count(act, b) <= 0) continue;
                const double dep = dependency_measure(df, act, b);
                if (dep > best_dep) {
                    best_dep = dep;
                    best = b;
                }
            }
            if (!best.empty() && !g.has_edge(act, best)) g.edges.push_back({act, best, best_dep});
        }
    }
    std::sort(g.edges.begin(), g.edges.end(), [](const DependencyEdge& a, const DependencyEdge& b) {
        return std::tie(a.from, a.to) < std::tie(b.from, b.to);
    });
    return g;
}

int ProcessNet::transition_of(const std::string& activity) const {
    auto it = transition_index.find(activity);
    return it == transition_index.end() ? -1 : it->second;
}

ProcessNet to_process_net(const DependencyGraph& g) {
    ProcessNet net;
    net.transitions = g.activities;
    for (std::size_t i = 0; i < net.transitions.size(); ++i)
        net.transition_index[net.transitions[i]] = static_cast<int>(i);
    net.transition_inputs.resize(net.transitions.size());
    net.transition_outputs.resize(net.transitions.size());

    net.places.push_back("source");
    net.source_place = 0;
    net.places.push_back("sink");
    net.sink_place = 1;

    for (const auto& a : g.start_activities)
        net.transition_inputs[static_cast<std::size_t>(net.transition_of(a))].push_back(net.source_place);
    for (const auto& a : g.end_activities)
        net.transition_outputs[static_cast<std::size_t>(net.transition_of(a))].push_back(net.sink_place);

    for (const auto& e : g.edges) {
        const int place = static_cast<int>(net.places.size());
        net.places.push_back("p(" + e.from + "," + e.to + ")");
        net.transition_outputs[static_cast<std::size_t>(net.transition_of(e.from))].push_back(place);
        net.transition_inputs[static_cast<std::size_t>(net.transition_of(e.to))].push_back(place);
    }

    // Reachability over the bipartite arc graph, tokens ignored.
    std::vector<bool> place_seen(net.places.size(), false);
    std::vector<bool> trans_seen(net.transitions.size(), false);
    std::deque<int> frontier; // place indices
    place_seen[static_cast<std::size_t>(net.source_place)] = true;
    frontier.push_back(net.source_place);
    while (!frontier.empty()) {
        const int p = frontier.front();
        frontier.pop_front();
        for (std::size_t t = 0; t < net.transitions.size(); ++t) {
            if (trans_seen[t]) continue;
            const auto& ins = net.transition_inputs[t];
            if (std::find(ins.begin(), ins.end(), p) == ins.end()) continue;
            trans_seen[t] = true;
            for (const int out : net.transition_outputs[t]) {
                if (!place_seen[static_cast<std::size_t>(out)]) {
                    place_seen[static_cast<std::size_t>(out)] = true;
                    frontier.push_back(out);
                }
            }
        }
    }
    for (std::size_t t = 0; t < net.transitions.size(); ++t)
        if (!trans_seen[t])
            throw StructuralError("transition '" + net.transitions[t] + "' unreachable from source; dependency graph disconnected");
    return net;
}

std::string net_to_json(const ProcessNet& net) {
    nlohmann::json j;
    j["transitions"] = net.transitions;
    j["places"] = net.places;
    j["source"] = net.places[static_cast<std::size_t>(net.source_place)];
    j["sink"] = net.places[static_cast<std::size_t>(net.sink_place)];
    auto arcs = nlohmann::json::array();
    for (std::size_t t = 0; t < net.transitions.size(); ++t) {
        for (const int p : net.transition_inputs[t])
            arcs.push_back({{"from", net.places[static_cast<std::size_t>(p)]}, {"to", net.transitions[t]}});
        for (const int p : net.transition_outputs[t])
            arcs.push_back({{"from", net.transitions[t]}, {"to", net.places[static_cast<std::size_t>(p)]}});
    }
    j["arcs"] = std::move(arcs);
    return j.dump(2);
}

ProcessNet net_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError(std::string("net: invalid JSON: ") + e.what());
    }
    ProcessNet net;
    net.transitions = j.at("transitions").get<std::vector<std::string>>();
    net.places = j.at("places").get<std::vector<std::string>>();
    for (std::size_t i = 0; i < net.transitions.size(); ++i)
        net.transition_index[net.transitions[i]] = static_cast<int>(i);
    net.transition_inputs.resize(net.transitions.size());
    net.transition_outputs.resize(net.transitions.size());
    std::unordered_map<std::string, int> place_index;
    for (std::size_t i = 0; i < net.places.size(); ++i) place_index[net.places[i]] = static_cast<int>(i);
    const auto source = j.at("source").get<std::string>();
    const auto sink = j.at("sink").get<std::string>();
    if (!place_index.count(source) || !place_index.count(sink)) throw InputError("net: source/sink not among places");
    net.source_place = place_index[source];
    net.sink_place = place_index[sink];
    for (const auto& arc : j.at("arcs")) {
        const auto from = arc.at("from").get<std::string>();
        const auto to = arc.at("to").get<std::string>();
        if (place_index.count(from) && net.transition_index.count(to)) {
            net.transition_inputs[static_cast<std::size_t>(net.transition_index[to])].push_back(place_index[from]);
        } else if (net.transition_index.count(from) && place_index.count(to)) {
            net.transition_outputs[static_cast<std::size_t>(net.transition_index[from])].push_back(place_index[to]);
        } else {
            throw InputError("net: arc endpoints '" + from + "' -> '" + to + "' not found");
        }
    }
    return net;
}

std::string net_to_dot(const ProcessNet& net) {
    std::ostringstream out;
    out << "digraph process {\n  rankdir=LR;\n";
    for (std::size_t p = 0; p < net.places.size(); ++p)
        out << "  \"pl" << p << "\" [shape=circle label=\"" << net.places[p] << "\"];\n";
    for (std::size_t t = 0; t < net.transitions.size(); ++t)
        out << "  \"tr" << t << "\" [shape=box label=\"" << net.transitions[t] << "\"];\n";
    for (std::size_t t = 0; t < net.transitions.size(); ++t) {
        for (const int p : net.transition_inputs[t]) out << "  \"pl" << p << "\" -> \"tr" << t << "\";\n";
        for (const int p : net.transition_outputs[t]) out << "  \"tr" << t << "\" -> \"pl" << p << "\";\n";
    }
    out << "}\n";
    return out.str();
}

} // namespace fairlens
