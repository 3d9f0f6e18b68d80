#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tjn/classical.hpp"
#include "tjn/eventlog.hpp"
#include "tjn/jackson.hpp"
#include "tjn/projection.hpp"
#include "tjn/rules.hpp"

namespace tjn {

// Process trees over concrete activities: no silent leaves, no duplicate
// activities. This is the class the basic inductive miner rediscovers.
struct PTree {
    enum Op { Leaf, Seq, Xor, And, Loop } op = Leaf;
    std::string activity;
    std::vector<PTree> children;
    bool operator==(const PTree &) const = default;
};

inline PTree pleaf(const std::string &a) { return {PTree::Leaf, a, {}}; }
inline PTree pnode(PTree::Op op, std::vector<PTree> kids) { return {op, "", std::move(kids)}; }

inline std::string print_tree(const PTree &t) {
    if (t.op == PTree::Leaf) return t.activity;
    static const std::map<PTree::Op, std::string> names = {
        {PTree::Seq, "seq"}, {PTree::Xor, "xor"}, {PTree::And, "and"}, {PTree::Loop, "loop"}};
    std::vector<std::string> kids;
    for (const auto &k : t.children) kids.push_back(print_tree(k));
    return names.at(t.op) + "(" + join(kids, ",") + ")";
}

// Bounded trace language of a tree (loops unrolled up to max_loop redos).
// Test oracle and fitness helper; exponential, for small trees only.
inline std::set<std::vector<std::string>> tree_language(const PTree &t, int max_loop = 2) {
    using Traces = std::set<std::vector<std::string>>;
    switch (t.op) {
        case PTree::Leaf: return {{t.activity}};
        case PTree::Seq: {
            Traces acc = {{}};
            for (const auto &k : t.children) {
                Traces next;
                for (const auto &a : acc)
                    for (const auto &b : tree_language(k, max_loop)) {
                        auto c = a;
                        c.insert(c.end(), b.begin(), b.end());
                        next.insert(c);
                    }
                acc = next;
            }
            return acc;
        }
        case PTree::Xor: {
            Traces acc;
            for (const auto &k : t.children)
                for (const auto &tr : tree_language(k, max_loop)) acc.insert(tr);
            return acc;
        }
        case PTree::And: {
            std::vector<Traces> kid_traces;
            for (const auto &k : t.children) kid_traces.push_back(tree_language(k, max_loop));
            Traces acc;
            std::vector<std::vector<std::string>> chosen(kid_traces.size());
            std::function<void(size_t)> pick = [&](size_t i) {
                if (i == kid_traces.size()) {
                    // all interleavings of the chosen traces
                    std::vector<size_t> pos(chosen.size(), 0);
                    std::vector<std::string> cur;
                    std::function<void()> weave = [&]() {
                        bool done = true;
                        for (size_t k = 0; k < chosen.size(); ++k) {
                            if (pos[k] < chosen[k].size()) {
                                done = false;
                                cur.push_back(chosen[k][pos[k]]);
                                ++pos[k];
                                weave();
                                --pos[k];
                                cur.pop_back();
                            }
                        }
                        if (done) acc.insert(cur);
                    };
                    weave();
                    return;
                }
                for (const auto &tr : kid_traces[i]) {
                    chosen[i] = tr;
                    pick(i + 1);
                }
            };
            pick(0);
            return acc;
        }
        case PTree::Loop: {
            Traces body = tree_language(t.children[0], max_loop);
            Traces redo;
            for (size_t i = 1; i < t.children.size(); ++i)
                for (const auto &tr : tree_language(t.children[i], max_loop)) redo.insert(tr);
            Traces acc = body;
            Traces frontier = body;
            for (int round = 0; round < max_loop; ++round) {
                Traces next;
                for (const auto &a : frontier)
                    for (const auto &r : redo)
                        for (const auto &b : body) {
                            auto c = a;
                            c.insert(c.end(), r.begin(), r.end());
                            c.insert(c.end(), b.begin(), b.end());
                            next.insert(c);
                        }
                acc.insert(next.begin(), next.end());
                frontier = next;
            }
            return acc;
        }
    }
    return {};
}

// --- transition-bordered nets, closure and strip ---

inline ClassicalNet closure(const ClassicalNet &tb) {
    auto starts = start_transitions(tb), finishes = finish_transitions(tb);
    if (starts.empty()) throw error("closure: no start transition");
    if (finishes.empty()) throw error("closure: no finish transition");
    auto unique_name = [&](std::string base) {
        while (tb.places.count(base) || tb.transitions.count(base)) base += "#";
        return base;
    };
    ClassicalNet wf = tb;
    const std::string in = unique_name("in"), out = unique_name("out");
    wf.places.insert(in);
    wf.places.insert(out);
    wf.source = in;
    wf.sink = out;
    for (const auto &t : starts) wf.arcs.insert({in, t});
    for (const auto &t : finishes) wf.arcs.insert({t, out});
    return wf;
}

inline ClassicalNet strip(const ClassicalNet &wf) {
    if (!wf.source || !wf.sink) throw error("strip needs a workflow net with source and sink");
    ClassicalNet tb = wf;
    for (const auto &p : {*wf.source, *wf.sink}) {
        tb.places.erase(p);
        for (auto it = tb.arcs.begin(); it != tb.arcs.end();)
            it = (it->first == p || it->second == p) ? tb.arcs.erase(it) : std::next(it);
    }
    tb.source.reset();
    tb.sink.reset();
    return tb;
}

// --- inductive miner (basic: recursive DFG cuts, no fallthrough) ---

struct miner_error : error {
    explicit miner_error(const std::string &what) : error(what) {}
};

namespace detail {

inline std::string dump_dfg(const Dfg &g) {
    std::vector<std::string> e;
    for (const auto &[a, b] : g.edges) e.push_back(a + ">" + b);
    return "starts={" + join(g.starts, ",") + "} ends={" + join(g.ends, ",") + "} edges={" +
           join(e, ",") + "}";
}

// connected components over the given activity set
inline std::vector<std::set<std::string>> components(
    const std::set<std::string> &acts,
    const std::function<bool(const std::string &, const std::string &)> &linked) {
    std::map<std::string, int> comp;
    int n = 0;
    for (const auto &a : acts) {
        if (comp.count(a)) continue;
        int id = n++;
        std::vector<std::string> stack{a};
        comp[a] = id;
        while (!stack.empty()) {
            std::string x = stack.back();
            stack.pop_back();
            for (const auto &y : acts)
                if (!comp.count(y) && (linked(x, y) || linked(y, x))) {
                    comp[y] = id;
                    stack.push_back(y);
                }
        }
    }
    std::vector<std::set<std::string>> out(static_cast<size_t>(n));
    for (const auto &[a, id] : comp) out[static_cast<size_t>(id)].insert(a);
    return out;
}

inline EventLog project_log(const EventLog &log, const std::set<std::string> &acts,
                            const char *cut_name) {
    EventLog out;
    out.types = log.types;
    for (const auto &t : log.traces) {
        LogTrace s;
        s.case_ids = t.case_ids;
        for (const auto &e : t.events)
            if (acts.count(e)) s.events.push_back(e);
        if (s.events.empty())
            throw miner_error(std::string("no cut found: ") + cut_name +
                              " split yields an empty part (a silent branch would be needed)");
        out.traces.insert(s);
    }
    return out;
}

}  // namespace detail

inline PTree inductive_miner(const EventLog &log) {
    if (log.traces.empty()) throw miner_error("empty log");
    for (const auto &t : log.traces)
        if (t.events.empty()) throw miner_error("empty trace requires a silent branch");
    Dfg g = dfg(log);

    // base case: a single activity, exactly once per trace
    if (g.activities.size() == 1) {
        const std::string a = *g.activities.begin();
        bool single = true;
        for (const auto &t : log.traces) single &= t.events.size() == 1;
        if (single) return pleaf(a);
        throw miner_error("no cut found: activity " + a + " repeats (self loop): " +
                          detail::dump_dfg(g));
    }

    auto df = [&](const std::string &a, const std::string &b) { return g.edges.count({a, b}) > 0; };

    // exclusive choice: weakly connected DFG components
    {
        auto comps = detail::components(g.activities, df);
        if (comps.size() >= 2) {
            std::vector<PTree> kids;
            for (const auto &c : comps) {
                EventLog part;
                part.types = log.types;
                for (const auto &t : log.traces) {
                    if (t.events.empty()) continue;
                    if (c.count(t.events.front())) {
                        for (const auto &e : t.events)
                            if (!c.count(e))
                                throw miner_error("no cut found: trace crosses exclusive components");
                        part.traces.insert(t);
                    }
                }
                if (part.traces.empty())
                    throw miner_error("no cut found: exclusive component never observed");
                kids.push_back(inductive_miner(part));
            }
            return pnode(PTree::Xor, std::move(kids));
        }
    }

    // sequence: order the SCC condensation; mutually unreachable SCCs merge
    {
        // reachability over activities
        std::map<std::string, std::set<std::string>> reach;
        for (const auto &a : g.activities) reach[a] = {a};
        for (bool changed = true; changed;) {
            changed = false;
            for (const auto &[a, b] : g.edges)
                for (const auto &c : reach[b])
                    if (reach[a].insert(c).second) changed = true;
        }
        auto mutually = [&](const std::string &a, const std::string &b) {
            return reach[a].count(b) && reach[b].count(a);
        };
        auto incomparable = [&](const std::string &a, const std::string &b) {
            return !reach[a].count(b) && !reach[b].count(a);
        };
        auto comps = detail::components(g.activities, [&](const std::string &a, const std::string &b) {
            return mutually(a, b) || incomparable(a, b);
        });
        if (comps.size() >= 2) {
            // strict order between groups
            bool total = true;
            auto before = [&](const std::set<std::string> &x, const std::set<std::string> &y) {
                for (const auto &a : x)
                    for (const auto &b : y)
                        if (reach[a].count(b)) return true;
                return false;
            };
            for (size_t i = 0; total && i < comps.size(); ++i)
                for (size_t j = 0; total && j < comps.size(); ++j)
                    if (i != j && before(comps[i], comps[j]) && before(comps[j], comps[i]))
                        total = false;
            if (total) {
                std::sort(comps.begin(), comps.end(),
                          [&](const auto &x, const auto &y) { return before(x, y); });
                std::vector<PTree> kids;
                for (const auto &c : comps)
                    kids.push_back(inductive_miner(detail::project_log(log, c, "sequence")));
                return pnode(PTree::Seq, std::move(kids));
            }
        }
    }

    // parallel: components after removing two-way pairs; each part needs a
    // start and an end activity
    {
        auto not_parallel = [&](const std::string &a, const std::string &b) {
            return !(df(a, b) && df(b, a));
        };
        auto comps = detail::components(g.activities, not_parallel);
        if (comps.size() >= 2) {
            bool ok = true;
            for (const auto &c : comps) {
                bool has_start = false, has_end = false;
                for (const auto &a : c) {
                    has_start |= g.starts.count(a) > 0;
                    has_end |= g.ends.count(a) > 0;
                }
                ok &= has_start && has_end;
            }
            if (ok) {
                std::vector<PTree> kids;
                for (const auto &c : comps)
                    kids.push_back(inductive_miner(detail::project_log(log, c, "parallel")));
                return pnode(PTree::And, std::move(kids));
            }
        }
    }

    // loop: body holds every start and end; redo components hang off them
    {
        auto linked = [&](const std::string &a, const std::string &b) {
            if (g.ends.count(a) && g.starts.count(b)) return false;  // cut the back edges
            return df(a, b);
        };
        auto comps = detail::components(g.activities, linked);
        std::set<std::string> body;
        std::vector<std::set<std::string>> redos;
        for (const auto &c : comps) {
            bool border = false;
            for (const auto &a : c) border |= g.starts.count(a) || g.ends.count(a);
            if (border)
                body.insert(c.begin(), c.end());
            else
                redos.push_back(c);
        }
        bool ok = !redos.empty() && !body.empty();
        for (const auto &[a, b] : g.edges) {
            if (body.count(a) && !body.count(b)) ok &= g.ends.count(a) > 0;
            if (!body.count(a) && body.count(b)) ok &= g.starts.count(b) > 0;
        }
        // redo parts must not touch each other
        for (size_t i = 0; ok && i < redos.size(); ++i)
            for (size_t j = 0; ok && j < redos.size(); ++j)
                if (i != j)
                    for (const auto &a : redos[i])
                        for (const auto &b : redos[j]) ok &= !df(a, b);
        if (ok) {
            // split traces into alternating body / redo segments
            EventLog body_log, redo_all;
            body_log.types = redo_all.types = log.types;
            int seg_id = 0;
            bool valid = true;
            for (const auto &t : log.traces) {
                std::vector<std::string> cur;
                bool in_body = true;
                auto flush = [&](bool body_seg) {
                    if (cur.empty()) {
                        valid = false;
                        return;
                    }
                    LogTrace s;
                    s.case_ids = {"seg" + std::to_string(seg_id++)};
                    s.events = cur;
                    (body_seg ? body_log : redo_all).traces.insert(s);
                    cur.clear();
                };
                for (const auto &e : t.events) {
                    bool eb = body.count(e) > 0;
                    if (eb != in_body) {
                        flush(in_body);
                        in_body = eb;
                    }
                    cur.push_back(e);
                }
                flush(in_body);
                valid &= in_body;  // traces must end in the body
            }
            if (valid && !redo_all.traces.empty()) {
                std::vector<PTree> kids;
                kids.push_back(inductive_miner(body_log));
                // redo components become separate children
                for (const auto &rc : redos) {
                    EventLog part;
                    part.types = log.types;
                    for (const auto &t : redo_all.traces)
                        if (rc.count(t.events.front())) part.traces.insert(t);
                    kids.push_back(inductive_miner(part));
                }
                return pnode(PTree::Loop, std::move(kids));
            }
        }
    }

    throw miner_error("no cut found: " + detail::dump_dfg(g));
}

// --- process tree -> workflow net (Jackson-style blocks) ---
// Parallel and loop blocks border on duplicated places; silent split/join
// transitions appear only where two place-bordered blocks meet.

namespace detail {

struct TreeBuild {
    int next_place = 0, next_tau = 0;
    std::set<std::string> taken;

    std::string fresh_place() {
        std::string n;
        do n = "q#" + std::to_string(next_place++);
        while (taken.count(n));
        return n;
    }
    std::string fresh_tau() {
        std::string n;
        do n = "tau#" + std::to_string(next_tau++);
        while (taken.count(n));
        return n;
    }

    // chain elements, each a well-sorted expression
    std::vector<JExpr> chain(const PTree &t) {
        switch (t.op) {
            case PTree::Leaf: return {jtrans(t.activity)};
            case PTree::Seq: {
                std::vector<JExpr> out;
                for (const auto &k : t.children) {
                    auto part = chain(k);
                    out.insert(out.end(), part.begin(), part.end());
                }
                return out;
            }
            case PTree::Xor: {
                JExpr acc = as_trans(t.children[0]);
                for (size_t i = 1; i < t.children.size(); ++i)
                    acc = jchoice(std::move(acc), as_trans(t.children[i]));
                return {acc};
            }
            case PTree::And: {
                JExpr acc = as_place(t.children[0]);
                for (size_t i = 1; i < t.children.size(); ++i)
                    acc = jpar(std::move(acc), as_place(t.children[i]));
                return {acc};
            }
            case PTree::Loop: {
                JExpr body = as_place(t.children[0]);
                JExpr redo = as_trans(t.children[1]);
                for (size_t i = 2; i < t.children.size(); ++i)
                    redo = jchoice(std::move(redo), as_trans(t.children[i]));
                return {jloop(std::move(body), std::move(redo))};
            }
        }
        throw error("unreachable");
    }

    JExpr assemble(std::vector<JExpr> elems) {
        std::vector<JExpr> filled;
        for (auto &e : elems) {
            if (!filled.empty()) {
                auto a = sort_of(filled.back()), b = sort_of(e);
                if (a == JExpr::TransSort && b == JExpr::TransSort)
                    filled.push_back(jplace(fresh_place()));
                else if (a == JExpr::PlaceSort && b == JExpr::PlaceSort)
                    filled.push_back(jtrans(fresh_tau()));
            }
            filled.push_back(std::move(e));
        }
        return renest_right(JExpr::Seq, std::move(filled));
    }

    JExpr as_trans(const PTree &t) {  // transition-bordered block
        auto elems = chain(t);
        if (sort_of(elems.front()) == JExpr::PlaceSort)
            elems.insert(elems.begin(), jtrans(fresh_tau()));
        if (sort_of(elems.back()) == JExpr::PlaceSort) elems.push_back(jtrans(fresh_tau()));
        return elems.size() == 1 ? elems[0] : assemble(std::move(elems));
    }
    JExpr as_place(const PTree &t) {  // place-bordered block
        auto elems = chain(t);
        if (sort_of(elems.front()) == JExpr::TransSort)
            elems.insert(elems.begin(), jplace(fresh_place()));
        if (sort_of(elems.back()) == JExpr::TransSort) elems.push_back(jplace(fresh_place()));
        return elems.size() == 1 ? elems[0] : assemble(std::move(elems));
    }
};

}  // namespace detail

inline ClassicalNet tree_to_wfnet(const PTree &tree) {
    detail::TreeBuild b;
    std::function<void(const PTree &)> collect = [&](const PTree &t) {
        if (t.op == PTree::Leaf) b.taken.insert(t.activity);
        for (const auto &k : t.children) collect(k);
    };
    collect(tree);
    std::string in = "in", out = "out";
    while (b.taken.count(in)) in += "#";
    while (b.taken.count(out)) out += "#";
    b.taken.insert(in);
    b.taken.insert(out);

    std::vector<JExpr> elems = b.chain(tree);
    elems.insert(elems.begin(), jplace(in));
    elems.push_back(jplace(out));
    JExpr expr = b.assemble(std::move(elems));
    ClassicalNet net = net_from_type(expr);
    net.source = in;
    net.sink = out;
    for (const auto &t : net.transitions)
        if (t.rfind("tau#", 0) == 0) net.silent.insert(t);
    return net;
}

// --- alpha miner ---

inline ClassicalNet alpha_miner(const EventLog &log) {
    if (log.traces.empty()) throw miner_error("empty log");
    Dfg g = dfg(log);
    std::vector<std::string> acts(g.activities.begin(), g.activities.end());
    auto df = [&](const std::string &a, const std::string &b) { return g.edges.count({a, b}) > 0; };
    auto causal = [&](const std::string &a, const std::string &b) { return df(a, b) && !df(b, a); };
    auto indep = [&](const std::string &a, const std::string &b) { return !df(a, b) && !df(b, a); };

    // candidate pairs (A, B): A and B internally independent, all-causal across
    std::vector<std::pair<std::set<std::string>, std::set<std::string>>> pairs;
    std::function<void(std::set<std::string>, size_t)> grow_b;
    std::function<void(std::set<std::string>, size_t)> grow_a = [&](std::set<std::string> a,
                                                                    size_t from) {
        if (!a.empty()) {
            std::set<std::string> b_candidates;
            for (const auto &b : acts) {
                bool ok = true;
                for (const auto &x : a) ok &= causal(x, b);
                if (ok) b_candidates.insert(b);
            }
            std::function<void(std::set<std::string>, std::vector<std::string>::size_type)> grow =
                [&](std::set<std::string> b, size_t bi) {
                    if (!b.empty()) pairs.push_back({a, b});
                    std::vector<std::string> bc(b_candidates.begin(), b_candidates.end());
                    for (size_t i = bi; i < bc.size(); ++i) {
                        bool ok = true;
                        for (const auto &y : b) ok &= indep(y, bc[i]);
                        if (!ok) continue;
                        auto nb = b;
                        nb.insert(bc[i]);
                        grow(nb, i + 1);
                    }
                };
            grow({}, 0);
        }
        for (size_t i = from; i < acts.size(); ++i) {
            bool ok = true;
            for (const auto &x : a) ok &= indep(x, acts[i]);
            if (!ok) continue;
            auto na = a;
            na.insert(acts[i]);
            grow_a(na, i + 1);
        }
    };
    grow_a({}, 0);

    // keep the maximal pairs
    std::vector<std::pair<std::set<std::string>, std::set<std::string>>> maximal;
    for (const auto &p : pairs) {
        bool dominated = false;
        for (const auto &q : pairs)
            if ((p.first != q.first || p.second != q.second) && is_subset(p.first, q.first) &&
                is_subset(p.second, q.second))
                dominated = true;
        if (!dominated) maximal.push_back(p);
    }

    ClassicalNet net;
    net.transitions.insert(acts.begin(), acts.end());
    auto unique_name = [&](std::string base) {
        while (net.places.count(base) || net.transitions.count(base)) base += "#";
        return base;
    };
    for (const auto &[a, b] : maximal) {
        std::string p = unique_name("p{" + join(a, " ") + "}{" + join(b, " ") + "}");
        net.places.insert(p);
        for (const auto &x : a) net.arcs.insert({x, p});
        for (const auto &y : b) net.arcs.insert({p, y});
    }
    const std::string in = unique_name("in"), out = unique_name("out");
    net.places.insert(in);
    net.places.insert(out);
    net.source = in;
    net.sink = out;
    for (const auto &t : g.starts) net.arcs.insert({in, t});
    for (const auto &t : g.ends) net.arcs.insert({t, out});
    return net;
}

// --- retyping discovered fragments back into t-PNID land ---

inline Net retype(const ClassicalNet &tb, const std::vector<std::string> &types) {
    Net out;
    out.types = types;
    std::sort(out.types.begin(), out.types.end());
    for (const auto &ty : out.types) out.variables[ty] = ty;
    const std::string sig = "#" + type_signature(out.types);
    const PlaceType pt = out.types;
    std::map<std::string, std::string> renamed;
    for (const auto &p : tb.places) {
        renamed[p] = p + sig;
        out.places[p + sig] = pt;
    }
    out.transitions = tb.transitions;
    VarVector mu = canonical_vector(out, pt);
    for (const auto &[a, b] : tb.arcs) {
        const std::string from = renamed.count(a) ? renamed.at(a) : a;
        const std::string to = renamed.count(b) ? renamed.at(b) : b;
        out.arcs[{from, to}] = {{mu, 1}};
    }
    return out;
}

// --- rediscovery pipeline ---

struct PerTypeReport {
    std::vector<std::string> types;
    int log_traces = 0;
    std::string status;  // "ok", "empty log", or a failure reason
    bool fits_log = false;
    std::optional<bool> iso_with_projection;  // when a reference net is given
};

struct RediscoveryResult {
    Net net;
    bool composed = false;
    std::vector<PerTypeReport> per_type;
};

// Runs induce -> mine -> strip -> retype per nonempty type subset and
// composes the fragments. The context net supplies the variable typing for
// the firing sequence (the reference net, or a types-only shell).
inline RediscoveryResult rediscover(const Net &context, const FiringSequence &eta,
                                    const std::vector<std::string> &types,
                                    const std::string &miner, const Net *reference = nullptr,
                                    int max_types_guard = 8) {
    if (types.empty()) throw error("rediscover needs a nonempty type list");
    if (static_cast<int>(types.size()) > max_types_guard)
        throw error("rediscover guard: too many types");
    std::vector<std::string> sorted = types;
    std::sort(sorted.begin(), sorted.end());
    RediscoveryResult result;
    bool all_ok = true, first = true;
    const size_t n = sorted.size();
    for (size_t mask = 1; mask < (1u << n); ++mask) {
        std::set<std::string> upsilon;
        for (size_t i = 0; i < n; ++i)
            if (mask & (1u << i)) upsilon.insert(sorted[i]);
        PerTypeReport report;
        report.types = std::vector<std::string>(upsilon.begin(), upsilon.end());
        EventLog log = induced_log(context, eta, upsilon);
        report.log_traces = static_cast<int>(log.traces.size());
        if (log.traces.empty()) {
            report.status = "empty log";
            if (reference) {
                Net proj = project(*reference, upsilon);
                if (!proj.places.empty() || !proj.transitions.empty()) {
                    report.status = "empty log but nonempty projection";
                    all_ok = false;
                }
            }
            result.per_type.push_back(report);
            continue;
        }
        try {
            ClassicalNet wf = miner == "alpha" ? alpha_miner(log) : tree_to_wfnet(inductive_miner(log));
            CMarking m0{{*wf.source, 1}};
            report.fits_log = generated_by(log, wf, m0).holds;
            if (!report.fits_log) throw miner_error("discovered net does not replay its log");
            Net frag = retype(strip(wf), report.types);
            if (reference) {
                Net proj = project(*reference, upsilon);
                report.iso_with_projection = net_isomorphic(frag, proj).has_value();
            }
            result.net = first ? frag : compose(result.net, frag);
            first = false;
            report.status = "ok";
        } catch (const error &e) {
            report.status = e.what();
            all_ok = false;
        }
        result.per_type.push_back(report);
    }
    result.composed = all_ok && !first;
    return result;
}

struct RediscoveryVerification {
    IsoModuloMinorsReport iso;
    BisimReport bisim;
    std::vector<std::pair<std::vector<std::string>, bool>> per_projection;
    bool ok() const {
        if (!iso.holds || !bisim.holds) return false;
        for (const auto &[u, holds] : per_projection)
            if (!holds) return false;
        return true;
    }
};

inline RediscoveryVerification verify_rediscovery(const Net &original, const Net &rediscovered,
                                                  const ExplorationBound &bound) {
    RediscoveryVerification v;
    v.iso = iso_modulo_minors(original, rediscovered);
    Lts a = state_space(original, Marking{}, bound).lts;
    Lts b = state_space(rediscovered, Marking{}, bound).lts;
    v.bisim = strong_bisim(a, b, true);
    auto used = godel_sorted(original, used_types(original));
    const size_t n = used.size();
    for (size_t mask = 1; mask < (1u << n) && n <= 8; ++mask) {
        std::set<std::string> upsilon;
        for (size_t i = 0; i < n; ++i)
            if (mask & (1u << i)) upsilon.insert(used[i]);
        bool holds = false;
        try {
            holds = net_isomorphic(project(original, upsilon), project(rediscovered, upsilon))
                        .has_value();
        } catch (const error &) {
        }
        v.per_projection.push_back({{upsilon.begin(), upsilon.end()}, holds});
    }
    return v;
}

// All complete runs (from the empty marking back to it, first return) up to
// the length bound, concatenated into one firing sequence with globally fresh
// identifiers. Exhaustive bounded simulation for df-complete log generation.
inline FiringSequence exhaustive_complete_runs(const Net &net, int max_len, int k = 1,
                                               int budget = 2000000) {
    ExplorationBound bound{k, 1 << 30};
    std::set<std::vector<std::string>> seen_traces;
    std::vector<std::vector<FiringRecord>> segments;
    std::vector<FiringRecord> cur;
    std::function<void(const Marking &)> dfs = [&](const Marking &m) {
        if (budget-- <= 0) return;
        if (m.empty() && !cur.empty()) {
            std::vector<std::string> trace;
            for (const auto &r : cur) trace.push_back(r.transition + "|" + serialize_binding(r.binding));
            if (seen_traces.insert(trace).second) segments.push_back(cur);
            return;  // first return to the empty marking ends the case bundle
        }
        if (static_cast<int>(cur.size()) >= max_len) return;
        for (const auto &t : net.transitions)
            for (const auto &psi : enabled_bindings(net, m, t, bound, canonical_fresh_namer(net, m))) {
                cur.push_back({t, psi});
                dfs(fire(net, m, t, psi));
                cur.pop_back();
            }
    };
    dfs(Marking{});

    FiringSequence out;
    std::map<std::string, int> counter;
    for (const auto &seg : segments) {
        std::map<std::string, std::string> rename;
        for (const auto &rec : seg) {
            FiringRecord r;
            r.transition = rec.transition;
            for (const auto &[v, id] : rec.binding) {
                auto [it, fresh] = rename.emplace(id, "");
                if (fresh) it->second = var_type(net, v) + std::to_string(++counter[var_type(net, v)]);
                r.binding[v] = it->second;
            }
            out.records.push_back(r);
        }
    }
    return out;
}

}  // namespace tjn
