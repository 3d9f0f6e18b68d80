#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "tjn/classical.hpp"
#include "tjn/core.hpp"
#include "tjn/io.hpp"
#include "tjn/projection.hpp"
#include "tjn/semantics.hpp"

namespace tjn {

// Identifiers used in a firing sequence, per type.
inline std::map<std::string, std::set<std::string>> ids_by_type(const Net &net,
                                                                const FiringSequence &eta) {
    std::map<std::string, std::set<std::string>> r;
    for (const auto &rec : eta.records)
        for (const auto &[v, id] : rec.binding) r[var_type(net, v)].insert(id);
    return r;
}

// Υ-induced event log: one trace per type-consistent identifier vector (one
// identifier of each type of Υ, types in Gödel order), keeping the firings
// whose binding range covers the whole vector. Empty traces are discarded.
inline EventLog induced_log(const Net &net, const FiringSequence &eta,
                            const std::set<std::string> &upsilon) {
    if (upsilon.empty()) throw error("induced log needs a nonempty type set");
    EventLog log;
    log.types = godel_sorted(net, upsilon);
    auto ids = ids_by_type(net, eta);

    std::vector<std::vector<std::string>> axes;
    for (const auto &ty : log.types) {
        auto &pool = ids[ty];
        if (pool.empty()) return log;  // no vector can be formed
        axes.emplace_back(pool.begin(), pool.end());
    }
    std::vector<size_t> idx(axes.size(), 0);
    for (;;) {
        LogTrace trace;
        for (size_t i = 0; i < axes.size(); ++i) trace.case_ids.push_back(axes[i][idx[i]]);
        std::set<std::string> want(trace.case_ids.begin(), trace.case_ids.end());
        for (const auto &rec : eta.records) {
            std::set<std::string> range;
            for (const auto &[v, id] : rec.binding) range.insert(id);
            if (is_subset(want, range)) trace.events.push_back(rec.transition);
        }
        if (!trace.events.empty()) log.traces.insert(trace);
        size_t k = 0;
        for (; k < idx.size(); ++k) {
            if (++idx[k] < axes[k].size()) break;
            idx[k] = 0;
        }
        if (k == idx.size()) break;
    }
    return log;
}

// Keeps the records whose binding mentions a Υ-typed variable, restricted to
// those variables. A transition-based filter (keep T_Υ of the projection)
// would lose records like a two-type self-loop step that binds both types
// through two single-type places, and the induced logs would no longer be
// stable under sequence projection.
inline FiringSequence project_sequence(const Net &net, const FiringSequence &eta,
                                       const std::set<std::string> &upsilon) {
    if (upsilon.empty()) throw error("sequence projection needs a nonempty type set");
    for (const auto &ty : upsilon) godel_rank(net, ty);
    FiringSequence out;
    for (const auto &rec : eta.records) {
        FiringRecord r;
        r.transition = rec.transition;
        for (const auto &[v, id] : rec.binding)
            if (upsilon.count(var_type(net, v))) r.binding[v] = id;
        if (!r.binding.empty()) out.records.push_back(r);
    }
    return out;
}

struct GeneratedByReport {
    bool holds = true;
    LogTrace failing_trace;
    int failing_index = -1;
};

// L is generated by (N, m0) iff every trace replays.
inline GeneratedByReport generated_by(const EventLog &log, const ClassicalNet &net,
                                      const CMarking &m0) {
    GeneratedByReport r;
    for (const auto &t : log.traces)
        for (const auto &a : t.events)
            if (!net.transitions.count(a)) throw error("log activity " + a + " unknown to the net");
    for (const auto &t : log.traces) {
        int fail = replay_trace(net, m0, t.events);
        if (fail >= 0) {
            r.holds = false;
            r.failing_trace = t;
            r.failing_index = fail;
            return r;
        }
    }
    return r;
}

// --- directly-follows graphs ---

struct Dfg {
    std::set<std::string> activities, starts, ends;
    std::set<std::pair<std::string, std::string>> edges;
    bool operator==(const Dfg &) const = default;
};

inline Dfg dfg(const EventLog &log) {
    Dfg g;
    for (const auto &t : log.traces) {
        if (t.events.empty()) continue;
        g.starts.insert(t.events.front());
        g.ends.insert(t.events.back());
        for (size_t i = 0; i < t.events.size(); ++i) {
            g.activities.insert(t.events[i]);
            if (i + 1 < t.events.size()) g.edges.insert({t.events[i], t.events[i + 1]});
        }
    }
    return g;
}

// DFG of a workflow net's complete-trace language, from its reachability
// graph. Assumes a sound net: every reachable state lies on a run to [out].
inline Dfg language_dfg(const ClassicalNet &net, const CMarking &m0, bool *truncated = nullptr) {
    CReach reach = classical_reachability(net, m0);
    if (truncated) *truncated = reach.truncated;
    Dfg g;
    CMarking final;
    if (net.sink) final[*net.sink] = 1;
    for (const auto &t : net.transitions)
        if (!net.silent.count(t)) g.activities.insert(t);
    // visible labels entering / leaving each state, with silent steps bridged
    const size_t n = reach.states.size();
    std::vector<std::set<int>> tau_fwd(n);  // silent closure, forward
    for (size_t s = 0; s < n; ++s) tau_fwd[s].insert(static_cast<int>(s));
    for (bool changed = true; changed;) {
        changed = false;
        for (const auto &[src, t, dst] : reach.edges)
            if (net.silent.count(t))
                for (size_t s = 0; s < n; ++s)
                    if (tau_fwd[s].count(src))
                        for (int d : tau_fwd[static_cast<size_t>(dst)])
                            if (tau_fwd[s].insert(d).second) changed = true;
    }
    int final_state = -1;
    for (size_t s = 0; s < n; ++s)
        if (reach.states[s] == final) final_state = static_cast<int>(s);
    for (const auto &[src, t, dst] : reach.edges) {
        if (net.silent.count(t)) continue;
        if (tau_fwd[0].count(src)) g.starts.insert(t);
        if (final_state >= 0 && tau_fwd[static_cast<size_t>(dst)].count(final_state))
            g.ends.insert(t);
        for (const auto &[src2, t2, dst2] : reach.edges) {
            if (net.silent.count(t2)) continue;
            if (tau_fwd[static_cast<size_t>(dst)].count(src2)) g.edges.insert({t, t2});
        }
    }
    return g;
}

struct DfCompleteReport {
    bool holds = false;
    bool inconclusive = false;
    Dfg log_dfg, model_dfg;
};

inline DfCompleteReport df_complete(const EventLog &log, const ClassicalNet &net,
                                    const CMarking &m0) {
    DfCompleteReport r;
    r.log_dfg = dfg(log);
    bool truncated = false;
    r.model_dfg = language_dfg(net, m0, &truncated);
    r.inconclusive = truncated;
    r.holds = !truncated && r.log_dfg.starts == r.model_dfg.starts &&
              r.log_dfg.ends == r.model_dfg.ends && r.log_dfg.edges == r.model_dfg.edges;
    return r;
}

}  // namespace tjn
