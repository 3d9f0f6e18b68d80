#pragma once

#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tjn/core.hpp"
#include "tjn/lts.hpp"
#include "tjn/util.hpp"

namespace tjn {

using Binding = std::map<std::string, std::string>;  // variable -> identifier

struct FiringRecord {
    std::string transition;
    Binding binding;
    bool operator==(const FiringRecord &) const = default;
};

struct FiringSequence {
    Marking initial;
    std::vector<FiringRecord> records;
    bool operator==(const FiringSequence &) const = default;
};

struct ExplorationBound {
    int max_ids_per_type = 1;
    int max_states = 100000;
};

inline std::string serialize_binding(const Binding &b) {
    std::vector<std::string> parts;
    for (const auto &[v, id] : b) parts.push_back(v + "=" + id);
    return join(parts, ",");
}

inline Binding parse_binding(const std::string &s) {
    Binding b;
    if (s.empty()) return b;
    size_t pos = 0;
    while (pos <= s.size()) {
        size_t comma = s.find(',', pos);
        std::string part = s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        size_t eq = part.find('=');
        if (eq == std::string::npos) throw error("bad binding " + s);
        b[part.substr(0, eq)] = part.substr(eq + 1);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return b;
}

// Instantiates an inscription under a binding. Distinct variable vectors may
// collapse onto one identifier vector; the counts add up.
inline TokenBag instantiate(const Inscription &ins, const Binding &psi) {
    TokenBag bag;
    for (const auto &[vec, n] : ins) {
        IdVector iv;
        iv.reserve(vec.size());
        for (const auto &v : vec) {
            auto it = psi.find(v);
            if (it == psi.end()) throw error("binding misses variable " + v);
            iv.push_back(it->second);
        }
        bag[iv] += n;
    }
    return bag;
}

// Throws on an ill-formed binding (wrong domain, ill-typed, non-injective);
// returns false when tokens or freshness are lacking.
inline bool enabled(const Net &net, const Marking &m, const std::string &t, const Binding &psi) {
    auto vs = variable_sets(net, t);
    if (psi.size() != vs.all.size()) throw error("binding domain differs from var(" + t + ")");
    std::set<std::string> values;
    for (const auto &[v, id] : psi) {
        if (!vs.all.count(v)) throw error("binding assigns foreign variable " + v);
        if (id.empty()) throw error("empty identifier in binding");
        if (!values.insert(id).second) throw error("binding not injective");
    }
    auto idt = id_types(net, m);
    for (const auto &[v, id] : psi) {
        auto present = idt.find(id);
        if (present != idt.end() && present->second != var_type(net, v))
            throw error("binding ill-typed: " + id + " is not of type " + var_type(net, v));
        const bool fresh_required = vs.emitting.count(v) > 0;
        if (fresh_required == (present != idt.end())) return false;
    }
    for (const auto &p : preset(net, t)) {
        TokenBag need = instantiate(net.arcs.at({p, t}), psi);
        for (const auto &[vec, n] : need)
            if (m.count(p, vec) < n) return false;
    }
    return true;
}

inline Marking fire(const Net &net, const Marking &m, const std::string &t, const Binding &psi) {
    if (!enabled(net, m, t, psi)) throw error("transition " + t + " not enabled under binding");
    Marking r = m;
    for (const auto &p : preset(net, t))
        for (const auto &[vec, n] : instantiate(net.arcs.at({p, t}), psi)) r.remove(p, vec, n);
    for (const auto &p : postset(net, t))
        for (const auto &[vec, n] : instantiate(net.arcs.at({t, p}), psi)) r.add(p, vec, n);
    return r;
}

// fresh(type, count) must return `count` distinct identifiers of the type,
// none of which occur in the marking.
using FreshNamer = std::function<std::vector<std::string>(const std::string &, int)>;

// Enumerates enabled bindings: input variables range over identifiers live in
// the marking, each emitting variable takes one canonical fresh identifier.
// Bindings emitting a type whose live-identifier count would exceed the bound
// are suppressed, which keeps the per-type count at maxIdsPerType.
inline std::vector<Binding> enabled_bindings(const Net &net, const Marking &m,
                                             const std::string &t, const ExplorationBound &bound,
                                             const FreshNamer &fresh) {
    auto vs = variable_sets(net, t);
    auto idt = id_types(net, m);
    std::map<std::string, std::vector<std::string>> live;  // type -> ids, sorted
    for (const auto &[id, ty] : idt) live[ty].push_back(id);

    std::map<std::string, int> emit_per_type;
    for (const auto &v : vs.emitting) emit_per_type[var_type(net, v)]++;
    for (const auto &[ty, c] : emit_per_type)
        if (static_cast<int>(live[ty].size()) + c > bound.max_ids_per_type) return {};

    Binding base;
    std::map<std::string, std::vector<std::string>> fresh_ids;
    for (const auto &[ty, c] : emit_per_type) fresh_ids[ty] = fresh(ty, c);
    std::map<std::string, int> next_fresh;
    for (const auto &v : vs.emitting)
        base[v] = fresh_ids[var_type(net, v)][next_fresh[var_type(net, v)]++];

    std::vector<std::string> invars(vs.in.begin(), vs.in.end());
    std::vector<Binding> result;
    Binding cur = base;
    std::set<std::string> used;
    std::function<void(size_t)> rec = [&](size_t i) {
        if (i == invars.size()) {
            if (enabled(net, m, t, cur)) result.push_back(cur);
            return;
        }
        const std::string &v = invars[i];
        for (const auto &id : live[var_type(net, v)]) {
            if (used.count(id)) continue;
            used.insert(id);
            cur[v] = id;
            rec(i + 1);
            cur.erase(v);
            used.erase(id);
        }
    };
    rec(0);
    return result;
}

// Default fresh policy outside canonical state spaces: "{typeName}{n}" with
// the smallest n >= 1 whose name is unused in the marking.
inline FreshNamer marking_fresh_namer(const Net &net, const Marking &m) {
    auto ids = ids_in(m);
    return [ids](const std::string &type, int count) {
        std::vector<std::string> out;
        for (int n = 1; static_cast<int>(out.size()) < count; ++n) {
            std::string name = type + std::to_string(n);
            if (!ids.count(name)) out.push_back(name);
        }
        return out;
    };
}

inline std::vector<Binding> enabled_bindings(const Net &net, const Marking &m,
                                             const std::string &t, const ExplorationBound &bound) {
    return enabled_bindings(net, m, t, bound, marking_fresh_namer(net, m));
}

struct ReplayResult {
    bool ok = true;
    int fail_index = -1;  // first record that is not enabled
    std::string reason;
    Marking final;
};

inline ReplayResult replay(const Net &net, const Marking &m0, const FiringSequence &seq) {
    ReplayResult r;
    Marking m = m0;
    for (size_t i = 0; i < seq.records.size(); ++i) {
        const auto &rec = seq.records[i];
        bool ok = false;
        try {
            ok = net.is_transition(rec.transition) && enabled(net, m, rec.transition, rec.binding);
        } catch (const error &e) {
            r.reason = e.what();
        }
        if (!ok) {
            r.ok = false;
            r.fail_index = static_cast<int>(i);
            if (r.reason.empty()) r.reason = "not enabled";
            r.final = m;
            return r;
        }
        m = fire(net, m, rec.transition, rec.binding);
    }
    r.final = m;
    return r;
}

// Seeded random walk. Fresh identifiers are named "{typeName}{n}" with a
// per-type counter over the whole run; names are never reused even after the
// identifier left the net.
inline FiringSequence run(const Net &net, const Marking &m0, int steps, uint64_t seed,
                          const ExplorationBound &bound = {4, 100000}) {
    SplitMix64 rng(seed);
    FiringSequence seq;
    seq.initial = m0;
    Marking m = m0;
    std::set<std::string> used_names = ids_in(m0);
    std::map<std::string, int> counter;
    auto fresh = [&](const std::string &type, int count) {
        std::vector<std::string> out;
        int c = counter[type];
        while (static_cast<int>(out.size()) < count) {
            ++c;
            std::string name = type + std::to_string(c);
            if (!used_names.count(name)) out.push_back(name);
        }
        return out;
    };
    for (int step = 0; step < steps; ++step) {
        std::vector<FiringRecord> choices;
        for (const auto &t : net.transitions)
            for (const auto &psi : enabled_bindings(net, m, t, bound, fresh))
                choices.push_back({t, psi});
        if (choices.empty()) break;
        FiringRecord rec = choices[static_cast<size_t>(rng.below(choices.size()))];
        m = fire(net, m, rec.transition, rec.binding);
        for (const auto &[v, id] : rec.binding)
            if (used_names.insert(id).second) {
                // committed a fresh name: advance the counter past it
                const std::string &ty = var_type(net, v);
                if (id.rfind(ty, 0) == 0) {
                    int n = atoi(id.c_str() + ty.size());
                    counter[ty] = std::max(counter[ty], n);
                }
            }
        seq.records.push_back(rec);
    }
    return seq;
}

// --- canonical state space ---

// Canonical form of a marking: identifiers renamed to "{type}#{i}" by the
// lexicographically least serialization over all per-type bijections, with
// places traversed in id order. Equal-up-to-bijection markings share it.
struct CanonicalMarking {
    Marking marking;
    std::map<std::string, std::string> sigma;  // original id -> canonical id
};

inline std::string serialize_marking(const Marking &m) {
    std::string s;
    for (const auto &[p, bag] : m.tokens) {
        s += p;
        s += '{';
        for (const auto &[vec, n] : bag) {
            s += join(vec, ",");
            s += '^';
            s += std::to_string(n);
            s += ';';
        }
        s += '}';
    }
    return s;
}

inline Marking rename_ids(const Marking &m, const std::map<std::string, std::string> &sigma) {
    Marking r;
    for (const auto &[p, bag] : m.tokens)
        for (const auto &[vec, n] : bag) {
            IdVector iv;
            iv.reserve(vec.size());
            for (const auto &id : vec) iv.push_back(sigma.at(id));
            r.add(p, iv, n);
        }
    return r;
}

inline CanonicalMarking canonical_marking(const Net &net, const Marking &m) {
    auto idt = id_types(net, m);
    std::map<std::string, std::vector<std::string>> per_type;
    for (const auto &[id, ty] : idt) per_type[ty].push_back(id);

    uint64_t combos = 1;
    for (const auto &[ty, ids] : per_type) {
        uint64_t f = 1;
        for (size_t i = 2; i <= ids.size(); ++i) f *= i;
        combos *= f;
        if (combos > 1000000) throw error("canonicalization blow-up: too many live identifiers");
    }

    std::vector<std::pair<std::string, std::vector<size_t>>> perms;  // type -> index perm
    for (const auto &[ty, ids] : per_type) {
        std::vector<size_t> idx(ids.size());
        for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        perms.emplace_back(ty, idx);
    }

    std::optional<std::string> best;
    CanonicalMarking out;
    std::function<void(size_t, std::map<std::string, std::string> &)> rec =
        [&](size_t level, std::map<std::string, std::string> &sigma) {
            if (level == perms.size()) {
                Marking cand = rename_ids(m, sigma);
                std::string ser = serialize_marking(cand);
                if (!best || ser < *best) {
                    best = ser;
                    out.marking = cand;
                    out.sigma = sigma;
                }
                return;
            }
            auto &[ty, idx] = perms[level];
            const auto &ids = per_type[ty];
            std::sort(idx.begin(), idx.end());
            do {
                for (size_t i = 0; i < ids.size(); ++i)
                    sigma[ids[i]] = ty + "#" + std::to_string(idx[i] + 1);
                rec(level + 1, sigma);
            } while (std::next_permutation(idx.begin(), idx.end()));
            for (const auto &id : ids) sigma.erase(id);
        };
    std::map<std::string, std::string> sigma;
    rec(0, sigma);
    return out;
}

struct Move {
    int src = 0;
    std::string transition;
    Binding binding;  // over the source state's canonical identifiers
    int dst = 0;
    // id (source-canonical or fresh-canonical) -> id in dst's canonical form;
    // identifiers absent from the map died in this move.
    std::map<std::string, std::string> renaming;
};

struct StateSpace {
    Lts lts;
    std::vector<Marking> markings;  // canonical, indexed by state
    std::vector<Move> moves;
    std::vector<int> parent_move;  // BFS tree: index into moves, -1 for initial
};

inline FreshNamer canonical_fresh_namer(const Net &net, const Marking &m) {
    auto ids = ids_in(m);
    return [ids](const std::string &type, int count) {
        std::vector<std::string> out;
        for (int n = 1; static_cast<int>(out.size()) < count; ++n) {
            std::string name = type + "#" + std::to_string(n);
            if (!ids.count(name)) out.push_back(name);
        }
        return out;
    };
}

inline StateSpace state_space(const Net &net, const Marking &m0, const ExplorationBound &bound) {
    StateSpace ss;
    auto c0 = canonical_marking(net, m0);
    std::map<std::string, int> index;
    index[serialize_marking(c0.marking)] = 0;
    ss.markings.push_back(c0.marking);
    ss.parent_move.push_back(-1);
    std::deque<int> queue{0};
    while (!queue.empty()) {
        if (static_cast<int>(ss.markings.size()) > bound.max_states) {
            ss.lts.truncated = true;
            break;
        }
        int s = queue.front();
        queue.pop_front();
        const Marking m = ss.markings[static_cast<size_t>(s)];
        for (const auto &t : net.transitions) {
            for (const auto &psi : enabled_bindings(net, m, t, bound, canonical_fresh_namer(net, m))) {
                Marking raw = fire(net, m, t, psi);
                auto canon = canonical_marking(net, raw);
                std::string ser = serialize_marking(canon.marking);
                auto [it, fresh_state] = index.emplace(ser, static_cast<int>(ss.markings.size()));
                if (fresh_state) {
                    ss.markings.push_back(canon.marking);
                    ss.parent_move.push_back(static_cast<int>(ss.moves.size()));
                    queue.push_back(it->second);
                }
                ss.moves.push_back({s, t, psi, it->second, canon.sigma});
                ss.lts.edges.push_back({s, t, serialize_binding(psi), it->second});
            }
        }
    }
    ss.lts.initial = 0;
    ss.lts.num_states = static_cast<int>(ss.markings.size());
    ss.lts.state_names.reserve(ss.markings.size());
    for (const auto &m : ss.markings) ss.lts.state_names.push_back(serialize_marking(m));
    return ss;
}

// Path of transition labels from the initial state to `state`, via BFS tree.
inline std::vector<std::string> path_to(const StateSpace &ss, int state) {
    std::vector<std::string> path;
    int s = state;
    while (s != 0) {
        int mi = ss.parent_move[static_cast<size_t>(s)];
        if (mi < 0) break;
        const Move &mv = ss.moves[static_cast<size_t>(mi)];
        path.push_back(mv.transition + "(" + serialize_binding(mv.binding) + ")");
        s = mv.src;
    }
    std::reverse(path.begin(), path.end());
    return path;
}

// --- bounded identifier soundness ---

struct TypeSoundness {
    std::string type;
    bool proper_completing = true;
    bool weakly_terminating = true;
    std::string counterexample;
};

struct SoundnessReport {
    std::vector<TypeSoundness> per_type;
    bool inconclusive = false;  // state space truncated
    bool sound() const {
        for (const auto &t : per_type)
            if (!t.proper_completing || !t.weakly_terminating) return false;
        return !inconclusive;
    }
};

inline SoundnessReport check_identifier_soundness(const Net &net, const Marking &m0,
                                                  const ExplorationBound &bound) {
    StateSpace ss = state_space(net, m0, bound);
    SoundnessReport report;
    report.inconclusive = ss.lts.truncated;
    std::map<std::string, TypeSoundness> per_type;
    for (const auto &ty : godel_sorted(net, used_types(net))) per_type[ty] = {ty, true, true, ""};

    // proper completion: a collecting firing leaves no token mentioning the
    // collected identifier behind
    std::map<std::string, std::set<std::string>> collecting_vars;  // transition -> vars
    for (const auto &t : net.transitions) collecting_vars[t] = variable_sets(net, t).collecting;
    for (size_t mi = 0; mi < ss.moves.size(); ++mi) {
        const Move &mv = ss.moves[mi];
        if (collecting_vars[mv.transition].empty()) continue;
        Marking raw = fire(net, ss.markings[static_cast<size_t>(mv.src)], mv.transition, mv.binding);
        auto left = ids_in(raw);
        for (const auto &v : collecting_vars[mv.transition]) {
            const std::string ty = var_type(net, v);
            auto &verdict = per_type[ty];
            if (!verdict.proper_completing) continue;
            const std::string id = mv.binding.at(v);
            if (left.count(id)) {
                verdict.proper_completing = false;
                verdict.counterexample =
                    "after " + join(path_to(ss, mv.src), ";") + (mv.src ? ";" : "") + mv.transition +
                    "(" + serialize_binding(mv.binding) + ") identifier " + id + " still marked";
            }
        }
    }

    // weak termination via the pointed graph over (state, live identifier)
    std::map<std::pair<int, std::string>, std::vector<std::pair<int, std::string>>> rev;
    std::deque<std::pair<int, std::string>> good;
    std::set<std::pair<int, std::string>> is_good;
    std::vector<std::pair<int, std::string>> nodes;
    for (int s = 0; s < static_cast<int>(ss.markings.size()); ++s)
        for (const auto &id : ids_in(ss.markings[static_cast<size_t>(s)])) nodes.push_back({s, id});
    for (const Move &mv : ss.moves) {
        for (const auto &id : ids_in(ss.markings[static_cast<size_t>(mv.src)])) {
            auto survives = mv.renaming.find(id);
            if (survives == mv.renaming.end()) {
                if (is_good.insert({mv.src, id}).second) good.push_back({mv.src, id});
            } else {
                rev[{mv.dst, survives->second}].push_back({mv.src, id});
            }
        }
    }
    while (!good.empty()) {
        auto n = good.front();
        good.pop_front();
        for (const auto &p : rev[n])
            if (is_good.insert(p).second) good.push_back(p);
    }
    for (const auto &n : nodes) {
        if (is_good.count(n)) continue;
        auto idt = id_types(net, ss.markings[static_cast<size_t>(n.first)]);
        auto &verdict = per_type[idt.at(n.second)];
        if (!verdict.weakly_terminating) continue;
        verdict.weakly_terminating = false;
        if (verdict.counterexample.empty())
            verdict.counterexample = "after " + join(path_to(ss, n.first), ";") + " identifier " +
                                     n.second + " can never be removed";
    }

    for (auto &[ty, v] : per_type) report.per_type.push_back(v);
    return report;
}

struct LivenessReport {
    bool quasi_live = true;
    std::vector<std::string> dead_transitions;
    bool live = true;  // from every state every transition is reachable again
    std::string counterexample;
    bool inconclusive = false;
    bool ok() const { return quasi_live && live && !inconclusive; }
};

inline LivenessReport check_liveness(const Net &net, const Marking &m0,
                                     const ExplorationBound &bound) {
    StateSpace ss = state_space(net, m0, bound);
    LivenessReport r;
    r.inconclusive = ss.lts.truncated;
    std::map<std::string, std::set<int>> sources;  // transition -> states firing it
    std::map<int, std::vector<int>> rev;           // dst -> srcs
    for (const auto &e : ss.lts.edges) {
        sources[e.act].insert(e.src);
        rev[e.dst].push_back(e.src);
    }
    for (const auto &t : net.transitions) {
        auto it = sources.find(t);
        if (it == sources.end()) {
            r.quasi_live = false;
            r.dead_transitions.push_back(t);
            continue;
        }
        // backward closure of the firing states must cover every state
        std::set<int> can(it->second.begin(), it->second.end());
        std::deque<int> q(can.begin(), can.end());
        while (!q.empty()) {
            int s = q.front();
            q.pop_front();
            for (int p : rev[s])
                if (can.insert(p).second) q.push_back(p);
        }
        if (static_cast<int>(can.size()) != ss.lts.num_states) {
            r.live = false;
            for (int s = 0; s < ss.lts.num_states; ++s)
                if (!can.count(s)) {
                    r.counterexample = "from state " + std::to_string(s) + " (" +
                                       serialize_marking(ss.markings[static_cast<size_t>(s)]) +
                                       ") transition " + t + " is unreachable";
                    break;
                }
        }
    }
    if (!r.quasi_live) r.live = false;
    return r;
}

// Restricts the binding part of visible edge labels to variables of the given
// types. Unlike rename(), the transform may merge labels.
inline Lts project_binding_labels(const Lts &lts, const Net &net,
                                  const std::set<std::string> &types) {
    Lts out = lts;
    for (auto &e : out.edges) {
        if (e.tau() || e.data.empty()) continue;
        Binding b = parse_binding(e.data);
        Binding kept;
        for (const auto &[v, id] : b)
            if (types.count(var_type(net, v))) kept[v] = id;
        e.data = serialize_binding(kept);
    }
    return out;
}

}  // namespace tjn
