#pragma once

#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tjn/equivalence.hpp"
#include "tjn/util.hpp"

namespace tjn {

// Classical place/transition nets (no types, no inscriptions). Workflow nets
// mark a source and sink place; transition-bordered nets leave them empty and
// use transitions with empty pre/postsets as borders. Transitions in `silent`
// are routing-only and never appear as activities.
struct ClassicalNet {
    std::set<std::string> places, transitions;
    std::set<std::pair<std::string, std::string>> arcs;
    std::optional<std::string> source, sink;
    std::set<std::string> silent;

    bool operator==(const ClassicalNet &) const = default;
};

inline std::set<std::string> preset(const ClassicalNet &n, const std::string &node) {
    std::set<std::string> r;
    for (const auto &[a, b] : n.arcs)
        if (b == node) r.insert(a);
    return r;
}

inline std::set<std::string> postset(const ClassicalNet &n, const std::string &node) {
    std::set<std::string> r;
    for (const auto &[a, b] : n.arcs)
        if (a == node) r.insert(b);
    return r;
}

inline std::set<std::string> start_transitions(const ClassicalNet &n) {
    std::set<std::string> r;
    for (const auto &t : n.transitions)
        if (preset(n, t).empty()) r.insert(t);
    return r;
}

inline std::set<std::string> finish_transitions(const ClassicalNet &n) {
    std::set<std::string> r;
    for (const auto &t : n.transitions)
        if (postset(n, t).empty()) r.insert(t);
    return r;
}

inline std::vector<std::string> wf_violations(const ClassicalNet &n) {
    std::vector<std::string> report;
    if (!n.source || !n.places.count(*n.source)) {
        report.push_back("missing source place");
        return report;
    }
    if (!n.sink || !n.places.count(*n.sink)) {
        report.push_back("missing sink place");
        return report;
    }
    if (!preset(n, *n.source).empty()) report.push_back("source place has a preset");
    if (!postset(n, *n.sink).empty()) report.push_back("sink place has a postset");
    // every node on a directed path from source to sink
    auto reach = [&](const std::string &from, bool forward) {
        std::set<std::string> seen{from};
        std::deque<std::string> q{from};
        while (!q.empty()) {
            auto x = q.front();
            q.pop_front();
            for (const auto &y : forward ? postset(n, x) : preset(n, x))
                if (seen.insert(y).second) q.push_back(y);
        }
        return seen;
    };
    auto fwd = reach(*n.source, true), bwd = reach(*n.sink, false);
    for (const auto &p : n.places)
        if (!fwd.count(p) || !bwd.count(p)) report.push_back("place " + p + " not on a source-sink path");
    for (const auto &t : n.transitions)
        if (!fwd.count(t) || !bwd.count(t)) report.push_back("transition " + t + " not on a source-sink path");
    return report;
}

// --- classical token semantics ---

using CMarking = std::map<std::string, int>;  // place -> tokens, zero entries absent

inline bool enabled(const ClassicalNet &n, const CMarking &m, const std::string &t) {
    for (const auto &p : preset(n, t)) {
        auto it = m.find(p);
        if (it == m.end() || it->second < 1) return false;
    }
    return true;
}

inline CMarking fire(const ClassicalNet &n, const CMarking &m, const std::string &t) {
    CMarking r = m;
    for (const auto &p : preset(n, t)) {
        if (--r[p] == 0) r.erase(p);
    }
    for (const auto &p : postset(n, t)) r[p] += 1;
    return r;
}

inline std::string serialize_cmarking(const CMarking &m) {
    std::string s;
    for (const auto &[p, c] : m) s += p + "^" + std::to_string(c) + ";";
    return s;
}

struct CReach {
    std::vector<CMarking> states;
    std::vector<std::tuple<int, std::string, int>> edges;  // (src, transition, dst)
    bool truncated = false;
};

inline CReach classical_reachability(const ClassicalNet &n, const CMarking &m0,
                                     int max_states = 100000) {
    CReach r;
    std::map<std::string, int> index;
    r.states.push_back(m0);
    index[serialize_cmarking(m0)] = 0;
    std::deque<int> q{0};
    while (!q.empty()) {
        if (static_cast<int>(r.states.size()) > max_states) {
            r.truncated = true;
            break;
        }
        int s = q.front();
        q.pop_front();
        CMarking m = r.states[static_cast<size_t>(s)];
        for (const auto &t : n.transitions) {
            if (!enabled(n, m, t)) continue;
            CMarking m2 = fire(n, m, t);
            auto [it, fresh] = index.emplace(serialize_cmarking(m2), static_cast<int>(r.states.size()));
            if (fresh) {
                r.states.push_back(m2);
                q.push_back(it->second);
            }
            r.edges.emplace_back(s, t, it->second);
        }
    }
    return r;
}

inline Lts classical_lts(const ClassicalNet &n, const CMarking &m0, int max_states = 100000) {
    CReach r = classical_reachability(n, m0, max_states);
    Lts lts;
    lts.num_states = static_cast<int>(r.states.size());
    lts.truncated = r.truncated;
    for (const auto &[s, t, d] : r.edges)
        lts.edges.push_back({s, n.silent.count(t) ? kTau : t, "", d});
    for (const auto &m : r.states) lts.state_names.push_back(serialize_cmarking(m));
    return lts;
}

// Replays an activity trace, letting silent transitions fire in between
// (breadth-first over the silent closure). Returns the failing position or -1.
inline int replay_trace(const ClassicalNet &n, const CMarking &m0,
                        const std::vector<std::string> &trace,
                        const std::optional<CMarking> &final = std::nullopt) {
    auto silent_closure = [&](std::set<std::string> ser_markings, std::vector<CMarking> ms) {
        for (size_t i = 0; i < ms.size(); ++i)
            for (const auto &t : n.silent)
                if (enabled(n, ms[i], t)) {
                    CMarking m2 = fire(n, ms[i], t);
                    if (ser_markings.insert(serialize_cmarking(m2)).second) ms.push_back(m2);
                }
        return ms;
    };
    std::vector<CMarking> frontier = silent_closure({serialize_cmarking(m0)}, {m0});
    for (size_t i = 0; i < trace.size(); ++i) {
        const std::string &act = trace[i];
        if (!n.transitions.count(act) || n.silent.count(act)) return static_cast<int>(i);
        std::vector<CMarking> next;
        std::set<std::string> seen;
        for (const auto &m : frontier)
            if (enabled(n, m, act)) {
                CMarking m2 = fire(n, m, act);
                if (seen.insert(serialize_cmarking(m2)).second) next.push_back(m2);
            }
        if (next.empty()) return static_cast<int>(i);
        frontier = silent_closure(seen, next);
    }
    if (final) {
        for (const auto &m : frontier)
            if (m == *final) return -1;
        return static_cast<int>(trace.size());
    }
    return -1;
}

inline IsoGraph classical_iso_graph(const ClassicalNet &n) {
    IsoGraph g;
    std::map<std::string, int> index;
    for (const auto &p : n.places) {
        index[p] = static_cast<int>(g.ids.size());
        g.ids.push_back(p);
        g.kind.push_back(0);
        std::string color = "P";
        if (n.source && *n.source == p) color += "/src";
        if (n.sink && *n.sink == p) color += "/snk";
        g.color.push_back(color);
    }
    for (const auto &t : n.transitions) {
        index[t] = static_cast<int>(g.ids.size());
        g.ids.push_back(t);
        g.kind.push_back(1);
        // visible transitions must map to the same activity name
        g.color.push_back(n.silent.count(t) ? "T/silent" : "T/" + t);
    }
    for (const auto &[a, b] : n.arcs) g.edges[{index.at(a), index.at(b)}] = "";
    return g;
}

// Isomorphism of classical nets. Visible transitions must keep their activity
// labels; places and silent transitions map freely.
inline std::optional<std::map<std::string, std::string>> classical_isomorphic(
    const ClassicalNet &a, const ClassicalNet &b) {
    return graph_isomorphism(classical_iso_graph(a), classical_iso_graph(b));
}

// Structure-only isomorphism, ignoring activity labels (used for the Jackson
// net/type equivalence, where atoms name the nodes).
inline std::optional<std::map<std::string, std::string>> classical_isomorphic_unlabeled(
    const ClassicalNet &a, const ClassicalNet &b) {
    IsoGraph ga = classical_iso_graph(a), gb = classical_iso_graph(b);
    for (auto &c : ga.color)
        if (c[0] == 'T') c = "T";
    for (auto &c : gb.color)
        if (c[0] == 'T') c = "T";
    return graph_isomorphism(ga, gb);
}

}  // namespace tjn
