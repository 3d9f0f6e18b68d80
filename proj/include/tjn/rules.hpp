#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tjn/core.hpp"
#include "tjn/equivalence.hpp"
#include "tjn/util.hpp"

namespace tjn {

// Generation rules for typed Jackson nets. Forward applications expand a net
// (surrounding arcs re-attach per rule); inverse applications reduce it.
// R6 uses single-transition emitter/collector fragments.
struct RuleApplication {
    enum Rule { R1, R2, R3, R4, R5, R6 };
    Rule rule = R1;
    std::vector<std::string> site;      // existing nodes the rule fires at
    std::vector<std::string> new_ids;   // fresh node ids, forward direction
    std::vector<std::string> type_set;  // R2: place type; R3: duplicate type; R6: introduced type
};

inline std::string rule_name(RuleApplication::Rule r) {
    static const char *names[] = {"R1", "R2", "R3", "R4", "R5", "R6"};
    return names[r];
}

inline std::string describe(const RuleApplication &a) {
    std::string s = rule_name(a.rule) + "@" + join(a.site, ",");
    if (!a.new_ids.empty()) s += " new=" + join(a.new_ids, ",");
    if (!a.type_set.empty()) s += " type=<" + join(a.type_set, ",") + ">";
    return s;
}

namespace detail {

inline void declare_types(Net &net, const std::vector<std::string> &types) {
    for (const auto &t : types) {
        if (std::find(net.types.begin(), net.types.end(), t) == net.types.end())
            net.types.push_back(t);
        bool have_var = false;
        for (const auto &[v, ty] : net.variables) have_var |= ty == t;
        if (!have_var) net.variables[t] = t;  // bijection: variable named like its type
    }
}

inline PlaceType sorted_type(std::vector<std::string> ts) {
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    return ts;
}

inline void require_fresh(const Net &net, const std::vector<std::string> &ids) {
    for (const auto &id : ids)
        if (net.is_place(id) || net.is_transition(id)) throw error("node id " + id + " already used");
}

inline void move_arcs(Net &net, const std::string &from_node, const std::string &to_node,
                      bool incoming) {
    std::vector<std::pair<Arc, Inscription>> moved;
    for (auto it = net.arcs.begin(); it != net.arcs.end();) {
        if (incoming ? it->first.second == from_node : it->first.first == from_node) {
            Arc a = incoming ? Arc{it->first.first, to_node} : Arc{to_node, it->first.second};
            moved.push_back({a, it->second});
            it = net.arcs.erase(it);
        } else {
            ++it;
        }
    }
    for (auto &[a, ins] : moved) net.arcs[a] = ins;
}

inline void erase_node(Net &net, const std::string &id) {
    net.places.erase(id);
    net.transitions.erase(id);
    for (auto it = net.arcs.begin(); it != net.arcs.end();)
        it = (it->first.first == id || it->first.second == id) ? net.arcs.erase(it) : std::next(it);
}

}  // namespace detail

inline Net expand(const Net &input, const RuleApplication &app) {
    using detail::declare_types;
    using detail::move_arcs;
    using detail::require_fresh;
    Net net = input;
    auto canon_arc = [&](const std::string &from, const std::string &to, const PlaceType &pt) {
        net.arcs[{from, to}] = {{canonical_vector(net, pt), 1}};
    };
    switch (app.rule) {
        case RuleApplication::R1: {  // place expansion: p -> p1;t;p2
            if (app.site.size() != 1 || !net.is_place(app.site[0])) throw error("R1 needs a place site");
            if (app.new_ids.size() != 3) throw error("R1 needs ids p1,t,p2");
            require_fresh(net, app.new_ids);
            const std::string p = app.site[0];
            const PlaceType pt = net.places.at(p);
            const auto &[p1, t, p2] = std::tie(app.new_ids[0], app.new_ids[1], app.new_ids[2]);
            net.places[p1] = pt;
            net.places[p2] = pt;
            net.transitions.insert(t);
            move_arcs(net, p, p1, true);
            move_arcs(net, p, p2, false);
            net.places.erase(p);
            canon_arc(p1, t, pt);
            canon_arc(t, p2, pt);
            return net;
        }
        case RuleApplication::R2: {  // transition expansion: t -> t1;p;t2, var(t) within λ
            if (app.site.size() != 1 || !net.is_transition(app.site[0]))
                throw error("R2 needs a transition site");
            if (app.new_ids.size() != 3) throw error("R2 needs ids t1,p,t2");
            require_fresh(net, app.new_ids);
            const std::string t = app.site[0];
            std::vector<std::string> lam = app.type_set;
            auto vt = types_of_vars(net, variable_sets(net, t).all);
            if (lam.empty()) lam.assign(vt.begin(), vt.end());
            declare_types(net, lam);
            PlaceType pt = detail::sorted_type(lam);
            if (pt.empty()) throw error("R2 place type must be nonempty");
            if (!is_subset(vt, std::set<std::string>(pt.begin(), pt.end())))
                throw error("R2 side condition violated: var(" + t + ") not within <" +
                            join(pt, ",") + ">");
            const auto &[t1, p, t2] = std::tie(app.new_ids[0], app.new_ids[1], app.new_ids[2]);
            net.transitions.insert(t1);
            net.transitions.insert(t2);
            net.places[p] = pt;
            move_arcs(net, t, t1, true);
            move_arcs(net, t, t2, false);
            net.transitions.erase(t);
            canon_arc(t1, p, pt);
            canon_arc(p, t2, pt);
            return net;
        }
        case RuleApplication::R3: {  // place duplication: t1;(p || p');t2
            if (app.site.size() != 1 || !net.is_place(app.site[0])) throw error("R3 needs a place site");
            if (app.new_ids.size() != 1) throw error("R3 needs the duplicate place id");
            require_fresh(net, app.new_ids);
            const std::string p = app.site[0];
            auto pre = preset(net, p), post = postset(net, p);
            if (pre.size() != 1 || post.size() != 1)
                throw error("R3 site must have singleton preset and postset");
            const std::string t1 = *pre.begin(), t2 = *post.begin();
            if (app.type_set.empty()) throw error("R3 needs the duplicate type");
            declare_types(net, app.type_set);
            PlaceType lam = detail::sorted_type(app.type_set);
            auto emit = types_of_vars(net, variable_sets(net, t2).emitting);
            for (const auto &ty : lam)
                if (emit.count(ty))
                    throw error("R3 side condition violated: <" + join(lam, ",") +
                                "> meets the emitting variables of " + t2);
            const std::string pd = app.new_ids[0];
            net.places[pd] = lam;
            canon_arc(t1, pd, lam);
            canon_arc(pd, t2, lam);
            return net;
        }
        case RuleApplication::R4: {  // transition duplication: t -> t + t'
            // per the rule shape, the site has at most one place on each side
            // (emitters and collectors have an empty side)
            if (app.site.size() != 1 || !net.is_transition(app.site[0]))
                throw error("R4 needs a transition site");
            if (app.new_ids.size() != 1) throw error("R4 needs the duplicate transition id");
            require_fresh(net, app.new_ids);
            const std::string t = app.site[0], td = app.new_ids[0];
            auto pre = preset(net, t), post = postset(net, t);
            if (pre.size() > 1 || post.size() > 1 || (pre.empty() && post.empty()) ||
                (pre == post && !pre.empty()))
                throw error("R4 site must sit between at most one input and output place");
            net.transitions.insert(td);
            if (!pre.empty()) net.arcs[{*pre.begin(), td}] = net.arcs.at({*pre.begin(), t});
            if (!post.empty()) net.arcs[{td, *post.begin()}] = net.arcs.at({t, *post.begin()});
            return net;
        }
        case RuleApplication::R5: {  // self loop addition: p -> p # t
            if (app.site.size() != 1 || !net.is_place(app.site[0])) throw error("R5 needs a place site");
            if (app.new_ids.size() != 1) throw error("R5 needs the loop transition id");
            require_fresh(net, app.new_ids);
            const std::string p = app.site[0], t = app.new_ids[0];
            net.transitions.insert(t);
            canon_arc(p, t, net.places.at(p));
            canon_arc(t, p, net.places.at(p));
            return net;
        }
        case RuleApplication::R6: {  // identifier introduction around t
            if (app.site.size() != 1 || !net.is_transition(app.site[0]))
                throw error("R6 needs a transition site");
            if (app.new_ids.size() != 3) throw error("R6 needs ids p,t1,t2");
            require_fresh(net, app.new_ids);
            const std::string t = app.site[0];
            if (app.type_set.empty()) throw error("R6 needs the introduced type");
            auto vt = types_of_vars(net, variable_sets(net, t).all);
            for (const auto &ty : app.type_set)
                if (vt.count(ty))
                    throw error("R6 side condition violated: <" + join(app.type_set, ",") +
                                "> meets var(" + t + ")");
            declare_types(net, app.type_set);
            PlaceType lam = detail::sorted_type(app.type_set);
            const auto &[p, t1, t2] = std::tie(app.new_ids[0], app.new_ids[1], app.new_ids[2]);
            net.places[p] = lam;
            net.transitions.insert(t1);
            net.transitions.insert(t2);
            canon_arc(t, p, lam);
            canon_arc(p, t, lam);
            canon_arc(t1, p, lam);
            canon_arc(p, t2, lam);
            return net;
        }
    }
    throw error("unreachable");
}

// --- inverse applications ---

namespace detail {

inline bool single_vector(const Inscription &ins) {
    return ins.size() == 1 && ins.begin()->second == 1;
}

inline bool plain_arc(const Net &net, const std::string &a, const std::string &b) {
    auto ins = arc_inscription(net, a, b);
    return ins && single_vector(*ins);
}

}  // namespace detail

// All sites where an inverse rule applies, each with the reduced net. The
// order follows the reduction heuristic: duplicates and self loops first,
// then chain contractions, then duplicates-by-type and identifier removal.
inline std::vector<std::pair<RuleApplication, Net>> reduce_candidates(const Net &net) {
    std::vector<std::pair<RuleApplication, Net>> out;

    // inverse R4: drop a twin transition sharing the same bordering places
    for (auto i = net.transitions.begin(); i != net.transitions.end(); ++i)
        for (auto j = std::next(i); j != net.transitions.end(); ++j) {
            auto pre = preset(net, *i), post = postset(net, *i);
            if (pre.size() > 1 || post.size() > 1 || (pre.empty() && post.empty())) continue;
            if (pre == post && !pre.empty()) continue;
            if (preset(net, *j) != pre || postset(net, *j) != post) continue;
            bool same = true;
            if (!pre.empty())
                same &= *arc_inscription(net, *pre.begin(), *i) ==
                        *arc_inscription(net, *pre.begin(), *j);
            if (!post.empty())
                same &= *arc_inscription(net, *i, *post.begin()) ==
                        *arc_inscription(net, *j, *post.begin());
            if (!same) continue;
            Net reduced = net;
            detail::erase_node(reduced, *j);
            out.push_back({{RuleApplication::R4, {*i, *j}, {}, {}}, reduced});
        }

    // inverse R5: drop a pure self-loop transition
    for (const auto &t : net.transitions) {
        auto pre = preset(net, t), post = postset(net, t);
        if (pre.size() != 1 || pre != post) continue;
        const std::string p = *pre.begin();
        if (!detail::plain_arc(net, p, t) || !detail::plain_arc(net, t, p)) continue;
        if (*arc_inscription(net, p, t) != *arc_inscription(net, t, p)) continue;
        Net reduced = net;
        detail::erase_node(reduced, t);
        out.push_back({{RuleApplication::R5, {p, t}, {}, {}}, reduced});
    }

    // inverse R1: contract p1;t;p2 into p1
    for (const auto &t : net.transitions) {
        auto pre = preset(net, t), post = postset(net, t);
        if (pre.size() != 1 || post.size() != 1 || pre == post) continue;
        const std::string p1 = *pre.begin(), p2 = *post.begin();
        if (!net.is_place(p1) || !net.is_place(p2)) continue;
        if (net.places.at(p1) != net.places.at(p2)) continue;
        if (postset(net, p1) != std::set<std::string>{t} || preset(net, p2) != std::set<std::string>{t})
            continue;
        if (!detail::plain_arc(net, p1, t) || !detail::plain_arc(net, t, p2)) continue;
        Net reduced = net;
        std::vector<std::pair<Arc, Inscription>> reattach;
        for (const auto &[arc, ins] : net.arcs)
            if (arc.first == p2) reattach.push_back({{p1, arc.second}, ins});
        detail::erase_node(reduced, t);
        detail::erase_node(reduced, p2);
        for (auto &[a, ins] : reattach) reduced.arcs[a] = ins;
        out.push_back({{RuleApplication::R1, {p1, t, p2}, {}, {}}, reduced});
    }

    // inverse R2: contract t1;p;t2 into t1
    for (const auto &[p, pt] : net.places) {
        auto pre = preset(net, p), post = postset(net, p);
        if (pre.size() != 1 || post.size() != 1 || pre == post) continue;
        const std::string t1 = *pre.begin(), t2 = *post.begin();
        if (postset(net, t1) != std::set<std::string>{p} || preset(net, t2) != std::set<std::string>{p})
            continue;
        if (!detail::plain_arc(net, t1, p) || !detail::plain_arc(net, p, t2)) continue;
        auto merged_vars = set_union(variable_sets(net, t1).in, variable_sets(net, t2).out);
        std::set<std::string> lam(pt.begin(), pt.end());
        if (!is_subset(types_of_vars(net, merged_vars), lam)) continue;
        Net reduced = net;
        std::vector<std::pair<Arc, Inscription>> reattach;
        for (const auto &[arc, ins] : net.arcs)
            if (arc.first == t2) reattach.push_back({{t1, arc.second}, ins});
        detail::erase_node(reduced, p);
        detail::erase_node(reduced, t2);
        for (auto &[a, ins] : reattach) reduced.arcs[a] = ins;
        out.push_back({{RuleApplication::R2, {t1, p, t2}, {}, {}}, reduced});
    }

    // inverse R3: drop a parallel duplicate place
    for (const auto &[p, pt] : net.places)
        for (const auto &[pd, pdt] : net.places) {
            if (p == pd) continue;
            auto pre = preset(net, p), post = postset(net, p);
            if (pre.size() != 1 || post.size() != 1) continue;
            if (preset(net, pd) != pre || postset(net, pd) != post) continue;
            const std::string t1 = *pre.begin(), t2 = *post.begin();
            if (!detail::plain_arc(net, t1, pd) || !detail::plain_arc(net, pd, t2)) continue;
            auto emit = types_of_vars(net, variable_sets(net, t2).emitting);
            bool ok = true;
            for (const auto &ty : pdt) ok &= !emit.count(ty);
            if (!ok) continue;
            Net reduced = net;
            detail::erase_node(reduced, pd);
            out.push_back({{RuleApplication::R3, {p, pd}, {}, {pdt.begin(), pdt.end()}}, reduced});
        }

    // inverse R6: remove an identifier type introduced around t
    for (const auto &[p, pt] : net.places) {
        auto pre = preset(net, p), post = postset(net, p);
        if (pre.size() != 2 || post.size() != 2) continue;
        for (const auto &t : pre) {
            if (!post.count(t) || !net.is_transition(t)) continue;  // the self-loop transition
            std::string t1, t2;
            for (const auto &x : pre)
                if (x != t) t1 = x;
            for (const auto &x : post)
                if (x != t) t2 = x;
            if (t1.empty() || t2.empty() || t1 == t2) continue;
            if (preset(net, t1).size() != 0 || postset(net, t1) != std::set<std::string>{p}) continue;
            if (postset(net, t2).size() != 0 || preset(net, t2) != std::set<std::string>{p}) continue;
            if (!detail::plain_arc(net, p, t) || !detail::plain_arc(net, t, p) ||
                !detail::plain_arc(net, t1, p) || !detail::plain_arc(net, p, t2))
                continue;
            // t's variables apart from the self loop must avoid the introduced types
            std::set<std::string> other_vars;
            for (const auto &[arc, ins] : net.arcs) {
                if ((arc.first == t && arc.second != p) || (arc.second == t && arc.first != p))
                    for (const auto &[vec, n] : ins)
                        for (const auto &v : vec) other_vars.insert(v);
            }
            auto other_types = types_of_vars(net, other_vars);
            bool ok = true;
            for (const auto &ty : pt) ok &= !other_types.count(ty);
            if (!ok) continue;
            Net reduced = net;
            detail::erase_node(reduced, t1);
            detail::erase_node(reduced, t2);
            detail::erase_node(reduced, p);
            out.push_back({{RuleApplication::R6, {t, p, t1, t2}, {}, {pt.begin(), pt.end()}}, reduced});
        }
    }
    return out;
}

// --- membership ---

struct TjnVerdict {
    enum Kind { Atomic, Multi, NotTjn, Inconclusive } kind = NotTjn;
    int transitions_left = 0;
    std::vector<RuleApplication> trace;  // inverse applications, in order
    std::string describe_kind() const {
        switch (kind) {
            case Atomic: return "atomic";
            case Multi: return "tjn(" + std::to_string(transitions_left) + " transitions)";
            case NotTjn: return "not_tjn";
            default: return "inconclusive";
        }
    }
};

namespace detail {

inline std::string net_serial(const Net &net) {
    std::string s;
    for (const auto &[p, pt] : net.places) s += "P" + p + "<" + join(pt, ",") + ">;";
    for (const auto &t : net.transitions) s += "T" + t + ";";
    for (const auto &[arc, ins] : net.arcs) {
        s += arc.first + ">" + arc.second + "[";
        for (const auto &[vec, n] : ins) s += join(vec, ",") + "^" + std::to_string(n) + ";";
        s += "];";
    }
    return s;
}

// Isomorphism-invariant hash for memoizing failed subnets.
inline std::string iso_hash(const Net &net) {
    IsoGraph g = net_iso_graph(net);
    std::vector<std::string> sig(g.ids.size());
    std::vector<std::vector<std::string>> in(g.ids.size()), out(g.ids.size());
    for (const auto &[e, c] : g.edges) {
        out[static_cast<size_t>(e.first)].push_back(c + "/" + g.color[static_cast<size_t>(e.second)]);
        in[static_cast<size_t>(e.second)].push_back(c + "/" + g.color[static_cast<size_t>(e.first)]);
    }
    for (size_t i = 0; i < g.ids.size(); ++i) {
        std::sort(in[i].begin(), in[i].end());
        std::sort(out[i].begin(), out[i].end());
        sig[i] = g.color[i] + "|" + join(in[i], ";") + "|" + join(out[i], ";");
    }
    std::sort(sig.begin(), sig.end());
    return join(sig, "\n");
}

struct TjnSearch {
    std::set<std::string> failed_exact;
    std::map<std::string, std::vector<Net>> failed_iso;
    int budget;
    bool capped = false;

    explicit TjnSearch(int b) : budget(b) {}

    bool known_failure(const Net &net, const std::string &serial) {
        if (failed_exact.count(serial)) return true;
        auto it = failed_iso.find(iso_hash(net));
        if (it != failed_iso.end())
            for (const auto &rep : it->second)
                if (net_isomorphic(net, rep)) return true;
        return false;
    }

    struct Success {
        std::vector<RuleApplication> trace;
        int transitions_left = 0;
    };

    std::optional<Success> run(const Net &net) {
        if (budget-- <= 0) {
            capped = true;
            return std::nullopt;
        }
        if (net.places.empty())
            return Success{{}, static_cast<int>(net.transitions.size())};
        std::string serial = net_serial(net);
        if (known_failure(net, serial)) return std::nullopt;
        for (auto &[app, reduced] : reduce_candidates(net)) {
            if (auto tail = run(reduced)) {
                tail->trace.insert(tail->trace.begin(), app);
                return tail;
            }
            if (capped) return std::nullopt;
        }
        failed_exact.insert(serial);
        failed_iso[iso_hash(net)].push_back(net);
        return std::nullopt;
    }
};

}  // namespace detail

inline TjnVerdict is_tjn(const Net &net, int budget = 200000) {
    TjnVerdict v;
    if (!validate(net).empty()) {
        v.kind = TjnVerdict::NotTjn;
        return v;
    }
    detail::TjnSearch search(budget);
    auto found = search.run(net);
    if (found) {
        v.transitions_left = found->transitions_left;
        v.kind = v.transitions_left == 1 ? TjnVerdict::Atomic : TjnVerdict::Multi;
        v.trace = found->trace;
    } else {
        v.kind = search.capped ? TjnVerdict::Inconclusive : TjnVerdict::NotTjn;
    }
    return v;
}

// --- seeded random generator (atomic by construction) ---

struct GenParams {
    int max_types = 4;
    int max_nodes = 25;
    // weights for R1..R6
    std::vector<int> rule_weights = {4, 4, 2, 2, 2, 2};
    int steps = 48;  // sampling attempts
};

struct GeneratedTjn {
    Net net;
    std::vector<RuleApplication> trace;
};

inline GeneratedTjn generate_random_tjn(uint64_t seed, const GenParams &params) {
    SplitMix64 rng(seed);
    GeneratedTjn g;
    g.net.transitions.insert("t0");
    int next_place = 0, next_trans = 0;
    const std::vector<std::string> type_pool = {"a", "b", "c", "d", "e", "f", "g", "h"};
    auto fresh_place = [&] { return "p" + std::to_string(next_place++); };
    auto fresh_trans = [&] { return "t" + std::to_string(++next_trans); };
    auto node_count = [&] {
        return static_cast<int>(g.net.places.size() + g.net.transitions.size());
    };
    auto rand_of = [&](const std::set<std::string> &s) {
        std::vector<std::string> v(s.begin(), s.end());
        return rng.pick(v);
    };

    for (int step = 0; step < params.steps && node_count() < params.max_nodes; ++step) {
        // weighted rule choice
        int total = 0;
        for (int w : params.rule_weights) total += w;
        if (total == 0) break;
        int roll = static_cast<int>(rng.below(static_cast<uint64_t>(total)));
        int rule = 0;
        for (; rule < 6; ++rule) {
            roll -= params.rule_weights[static_cast<size_t>(rule)];
            if (roll < 0) break;
        }
        RuleApplication app;
        app.rule = static_cast<RuleApplication::Rule>(rule);
        try {
            switch (app.rule) {
                case RuleApplication::R1: {
                    if (g.net.places.empty()) continue;
                    std::vector<std::string> ids;
                    for (const auto &[p, pt] : g.net.places) ids.push_back(p);
                    app.site = {rng.pick(ids)};
                    app.new_ids = {fresh_place(), fresh_trans(), fresh_place()};
                    break;
                }
                case RuleApplication::R2: {
                    app.site = {rand_of(g.net.transitions)};
                    auto vt = types_of_vars(g.net, variable_sets(g.net, app.site[0]).all);
                    std::vector<std::string> lam(vt.begin(), vt.end());
                    const bool extend = lam.empty() || rng.below(4) == 0;
                    if (extend) {
                        std::vector<std::string> options;
                        for (const auto &ty : g.net.types)
                            if (!vt.count(ty)) options.push_back(ty);
                        if (static_cast<int>(g.net.types.size()) < params.max_types)
                            options.push_back(type_pool[g.net.types.size()]);
                        if (!options.empty()) lam.push_back(rng.pick(options));
                    }
                    if (lam.empty()) continue;
                    app.type_set = lam;
                    app.new_ids = {fresh_trans(), fresh_place(), fresh_trans()};
                    break;
                }
                case RuleApplication::R3: {
                    std::vector<std::string> sites;
                    for (const auto &[p, pt] : g.net.places)
                        if (preset(g.net, p).size() == 1 && postset(g.net, p).size() == 1)
                            sites.push_back(p);
                    if (sites.empty()) continue;
                    app.site = {rng.pick(sites)};
                    // duplicate with a subset of the site's type: wider types
                    // would let bindings cover type combinations that no
                    // single place carries
                    const PlaceType &pt = g.net.places.at(app.site[0]);
                    const std::string t2 = *postset(g.net, app.site[0]).begin();
                    auto emit = types_of_vars(g.net, variable_sets(g.net, t2).emitting);
                    std::vector<std::string> options;
                    for (const auto &ty : pt)
                        if (!emit.count(ty)) options.push_back(ty);
                    if (options.empty()) continue;
                    app.type_set = {rng.pick(options)};
                    if (rng.below(3) == 0 && options.size() > 1) {
                        std::string extra = rng.pick(options);
                        if (extra != app.type_set[0]) app.type_set.push_back(extra);
                    }
                    app.new_ids = {fresh_place()};
                    break;
                }
                case RuleApplication::R4: {
                    std::vector<std::string> sites;
                    for (const auto &t : g.net.transitions) {
                        auto pre = preset(g.net, t), post = postset(g.net, t);
                        if (pre.size() <= 1 && post.size() <= 1 && !(pre.empty() && post.empty()) &&
                            !(pre == post && !pre.empty()))
                            sites.push_back(t);
                    }
                    if (sites.empty()) continue;
                    app.site = {rng.pick(sites)};
                    app.new_ids = {fresh_trans()};
                    break;
                }
                case RuleApplication::R5: {
                    if (g.net.places.empty()) continue;
                    std::vector<std::string> ids;
                    for (const auto &[p, pt] : g.net.places) ids.push_back(p);
                    app.site = {rng.pick(ids)};
                    app.new_ids = {fresh_trans()};
                    break;
                }
                case RuleApplication::R6: {
                    app.site = {rand_of(g.net.transitions)};
                    auto vt = types_of_vars(g.net, variable_sets(g.net, app.site[0]).all);
                    std::vector<std::string> options;
                    for (const auto &ty : g.net.types)
                        if (!vt.count(ty)) options.push_back(ty);
                    if (static_cast<int>(g.net.types.size()) < params.max_types)
                        options.push_back(type_pool[g.net.types.size()]);
                    if (options.empty()) continue;
                    app.type_set = {rng.pick(options)};
                    app.new_ids = {fresh_place(), fresh_trans(), fresh_trans()};
                    break;
                }
            }
            g.net = expand(g.net, app);
            g.trace.push_back(app);
        } catch (const error &) {
            continue;  // side condition failed for the sampled parameters
        }
    }
    return g;
}

}  // namespace tjn
