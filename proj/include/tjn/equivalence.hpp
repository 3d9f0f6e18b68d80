#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tjn/core.hpp"
#include "tjn/lts.hpp"

namespace tjn {

// --- colored bipartite graph isomorphism (backtracking, degree/color pruning) ---

struct IsoGraph {
    std::vector<std::string> ids;
    std::vector<int> kind;            // 0 = place, 1 = transition
    std::vector<std::string> color;   // node invariant that must be preserved
    std::map<std::pair<int, int>, std::string> edges;  // (src,dst) -> edge color
};

inline std::optional<std::map<std::string, std::string>> graph_isomorphism(const IsoGraph &g1,
                                                                           const IsoGraph &g2) {
    const size_t n = g1.ids.size();
    if (n != g2.ids.size() || g1.edges.size() != g2.edges.size()) return std::nullopt;

    // refine node colors with degrees and adjacent edge colors (1-WL round)
    auto signatures = [](const IsoGraph &g) {
        std::vector<std::string> sig(g.ids.size());
        std::vector<std::vector<std::string>> in(g.ids.size()), out(g.ids.size());
        for (const auto &[e, c] : g.edges) {
            out[static_cast<size_t>(e.first)].push_back(c + "/" + g.color[static_cast<size_t>(e.second)]);
            in[static_cast<size_t>(e.second)].push_back(c + "/" + g.color[static_cast<size_t>(e.first)]);
        }
        for (size_t i = 0; i < g.ids.size(); ++i) {
            std::sort(in[i].begin(), in[i].end());
            std::sort(out[i].begin(), out[i].end());
            sig[i] = std::to_string(g.kind[i]) + "|" + g.color[i] + "|" + join(in[i], ";") + "|" +
                     join(out[i], ";");
        }
        return sig;
    };
    std::vector<std::string> sig1 = signatures(g1), sig2 = signatures(g2);
    {
        std::vector<std::string> a = sig1, b = sig2;
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        if (a != b) return std::nullopt;
    }

    std::vector<std::vector<int>> cand(n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            if (sig1[i] == sig2[j]) cand[i].push_back(static_cast<int>(j));

    std::vector<size_t> order(n);
    for (size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return cand[a].size() < cand[b].size(); });

    std::vector<int> map1(n, -1), map2(n, -1);
    std::function<bool(size_t)> rec = [&](size_t level) -> bool {
        if (level == n) return true;
        size_t v = order[level];
        for (int w : cand[v]) {
            if (map2[static_cast<size_t>(w)] != -1) continue;
            bool ok = true;
            // consistency with already-mapped neighbors, both directions
            for (size_t u = 0; ok && u < n; ++u) {
                if (map1[u] == -1) continue;
                auto e1 = g1.edges.find({static_cast<int>(v), static_cast<int>(u)});
                auto e2 = g2.edges.find({w, map1[u]});
                if ((e1 == g1.edges.end()) != (e2 == g2.edges.end()) ||
                    (e1 != g1.edges.end() && e1->second != e2->second))
                    ok = false;
                auto f1 = g1.edges.find({static_cast<int>(u), static_cast<int>(v)});
                auto f2 = g2.edges.find({map1[u], w});
                if ((f1 == g1.edges.end()) != (f2 == g2.edges.end()) ||
                    (f1 != g1.edges.end() && f1->second != f2->second))
                    ok = false;
            }
            if (!ok) continue;
            map1[v] = w;
            map2[static_cast<size_t>(w)] = static_cast<int>(v);
            if (rec(level + 1)) return true;
            map1[v] = -1;
            map2[static_cast<size_t>(w)] = -1;
        }
        return false;
    };
    if (!rec(0)) return std::nullopt;
    std::map<std::string, std::string> out;
    for (size_t i = 0; i < n; ++i) out[g1.ids[i]] = g2.ids[static_cast<size_t>(map1[i])];
    return out;
}

// Inscription signature invariant under variable renaming: multiset of type
// vectors. Two isomorphic nets may name variables differently.
inline std::string inscription_signature(const Net &net, const Inscription &ins) {
    std::vector<std::string> parts;
    for (const auto &[vec, n] : ins)
        parts.push_back(join(type_of_vector(net, vec), ",") + "^" + std::to_string(n));
    std::sort(parts.begin(), parts.end());
    return join(parts, "|");
}

inline IsoGraph net_iso_graph(const Net &net) {
    IsoGraph g;
    std::map<std::string, int> index;
    for (const auto &[id, pt] : net.places) {
        index[id] = static_cast<int>(g.ids.size());
        g.ids.push_back(id);
        g.kind.push_back(0);
        g.color.push_back("P<" + join(pt, ",") + ">");
    }
    for (const auto &t : net.transitions) {
        index[t] = static_cast<int>(g.ids.size());
        g.ids.push_back(t);
        g.kind.push_back(1);
        // transitions are the activity alphabet: they map by name, while
        // places (renamed by projection and discovery) map freely
        g.color.push_back("T/" + t);
    }
    for (const auto &[arc, ins] : net.arcs)
        g.edges[{index.at(arc.first), index.at(arc.second)}] = inscription_signature(net, ins);
    return g;
}

struct NodeBijection {
    std::map<std::string, std::string> place_map;
    std::map<std::string, std::string> transition_map;
};

// Isomorphism preserving place types and arc inscriptions (up to the
// variable/type bijection); node names are free.
inline std::optional<NodeBijection> net_isomorphic(const Net &n1, const Net &n2) {
    if (n1.places.size() != n2.places.size() || n1.transitions.size() != n2.transitions.size())
        return std::nullopt;
    auto m = graph_isomorphism(net_iso_graph(n1), net_iso_graph(n2));
    if (!m) return std::nullopt;
    NodeBijection b;
    for (const auto &[from, to] : *m)
        (n1.is_place(from) ? b.place_map : b.transition_map)[from] = to;
    return b;
}

// One-pass validator used by tests: confirms a claimed bijection edge by edge.
inline bool validate_net_bijection(const Net &n1, const Net &n2, const NodeBijection &b) {
    if (b.place_map.size() != n1.places.size() || b.transition_map.size() != n1.transitions.size())
        return false;
    std::set<std::string> targets;
    auto image = [&](const std::string &id) -> std::optional<std::string> {
        auto p = b.place_map.find(id);
        if (p != b.place_map.end()) return p->second;
        auto t = b.transition_map.find(id);
        if (t != b.transition_map.end()) return t->second;
        return std::nullopt;
    };
    for (const auto &[p, pt] : n1.places) {
        auto q = b.place_map.find(p);
        if (q == b.place_map.end() || !n2.places.count(q->second)) return false;
        if (!targets.insert(q->second).second) return false;
        if (join(n2.places.at(q->second), ",") != join(pt, ",")) return false;
    }
    for (const auto &t : n1.transitions) {
        auto q = b.transition_map.find(t);
        if (q == b.transition_map.end() || !n2.transitions.count(q->second)) return false;
        if (!targets.insert(q->second).second) return false;
    }
    if (n1.arcs.size() != n2.arcs.size()) return false;
    for (const auto &[arc, ins] : n1.arcs) {
        auto from = image(arc.first), to = image(arc.second);
        if (!from || !to) return false;
        auto it = n2.arcs.find({*from, *to});
        if (it == n2.arcs.end()) return false;
        if (inscription_signature(n1, ins) != inscription_signature(n2, it->second)) return false;
    }
    return true;
}

// --- bisimulation (partition refinement on the disjoint union) ---

struct BisimReport {
    std::string kind;  // "strong" | "weak" | "weak-sim"
    bool rooted = true;
    bool holds = false;
    std::vector<std::pair<int, int>> witness;  // related (state of l1, state of l2)
    std::string counterexample;
};

namespace detail {

struct Union {
    int n1 = 0, n2 = 0, init1 = 0, init2 = 0;
    std::vector<LtsEdge> edges;  // states 0..n1-1 from l1, n1..n1+n2-1 from l2
};

inline Union disjoint_union(const Lts &l1, const Lts &l2) {
    Union u;
    u.n1 = l1.num_states;
    u.n2 = l2.num_states;
    u.init1 = l1.initial;
    u.init2 = u.n1 + l2.initial;
    u.edges = l1.edges;
    for (const auto &e : l2.edges)
        u.edges.push_back({e.src + u.n1, e.act, e.data, e.dst + u.n1});
    return u;
}

inline std::vector<int> refine(const Union &u) {
    const int n = u.n1 + u.n2;
    std::vector<int> block(static_cast<size_t>(n), 0);
    for (;;) {
        std::map<int, std::map<std::pair<std::string, int>, bool>> sigs;
        std::map<std::pair<int, std::string>, int> regroup;
        std::vector<std::string> key(static_cast<size_t>(n));
        std::vector<std::set<std::string>> sig(static_cast<size_t>(n));
        for (const auto &e : u.edges)
            sig[static_cast<size_t>(e.src)].insert(e.label() + "->" +
                                                   std::to_string(block[static_cast<size_t>(e.dst)]));
        for (int s = 0; s < n; ++s)
            key[static_cast<size_t>(s)] =
                std::to_string(block[static_cast<size_t>(s)]) + "|" + join(sig[static_cast<size_t>(s)], " ");
        std::map<std::string, int> ids;
        std::vector<int> next(static_cast<size_t>(n));
        for (int s = 0; s < n; ++s) {
            auto [it, fresh] = ids.emplace(key[static_cast<size_t>(s)], static_cast<int>(ids.size()));
            next[static_cast<size_t>(s)] = it->second;
        }
        if (next == block) return block;
        block = next;
    }
}

// τ-saturation: weak edges s =a=> u (τ* a τ*) plus reflexive/transitive
// s =τ=> u. The result has a τ self-loop on every state.
inline Lts saturate(const Lts &l) {
    const size_t n = static_cast<size_t>(l.num_states);
    std::vector<std::set<int>> tau(n);
    for (size_t s = 0; s < n; ++s) tau[s].insert(static_cast<int>(s));
    for (const auto &e : l.edges)
        if (e.tau()) tau[static_cast<size_t>(e.src)].insert(e.dst);
    for (bool changed = true; changed;) {
        changed = false;
        for (size_t s = 0; s < n; ++s)
            for (int m : std::set<int>(tau[s]))
                for (int t : tau[static_cast<size_t>(m)])
                    if (tau[s].insert(t).second) changed = true;
    }
    Lts out;
    out.initial = l.initial;
    out.num_states = l.num_states;
    out.truncated = l.truncated;
    std::set<LtsEdge> edges;
    for (size_t s = 0; s < n; ++s)
        for (int m : tau[s]) edges.insert({static_cast<int>(s), kTau, "", m});
    for (const auto &e : l.edges) {
        if (e.tau()) continue;
        for (size_t s = 0; s < n; ++s) {
            if (!tau[s].count(e.src)) continue;
            for (int t : tau[static_cast<size_t>(e.dst)])
                edges.insert({static_cast<int>(s), e.act, e.data, t});
        }
    }
    out.edges.assign(edges.begin(), edges.end());
    return out;
}

inline std::string explain_split(const Union &u, const std::vector<int> &block, int s1, int s2) {
    std::set<std::string> a, b;
    for (const auto &e : u.edges) {
        if (e.src == s1) a.insert(e.label() + " -> class " + std::to_string(block[static_cast<size_t>(e.dst)]));
        if (e.src == s2) b.insert(e.label() + " -> class " + std::to_string(block[static_cast<size_t>(e.dst)]));
    }
    for (const auto &x : a)
        if (!b.count(x)) return "left offers " + x + ", right cannot match";
    for (const auto &x : b)
        if (!a.count(x)) return "right offers " + x + ", left cannot match";
    return "initial states in different classes";
}

}  // namespace detail

inline BisimReport strong_bisim(const Lts &l1, const Lts &l2, bool rooted) {
    auto u = detail::disjoint_union(l1, l2);
    auto block = detail::refine(u);
    BisimReport r;
    r.kind = "strong";
    r.rooted = rooted;
    r.holds = block[static_cast<size_t>(u.init1)] == block[static_cast<size_t>(u.init2)];
    if (r.holds) {
        for (int s = 0; s < u.n1; ++s)
            for (int t = 0; t < u.n2; ++t)
                if (block[static_cast<size_t>(s)] == block[static_cast<size_t>(u.n1 + t)])
                    r.witness.push_back({s, t});
    } else {
        r.counterexample = detail::explain_split(u, block, u.init1, u.init2);
    }
    return r;
}

inline BisimReport weak_bisim(const Lts &l1, const Lts &l2, bool rooted) {
    BisimReport r = strong_bisim(detail::saturate(l1), detail::saturate(l2), rooted);
    r.kind = "weak";
    return r;
}

// Greatest weak simulation of l1 by l2 (one direction).
inline BisimReport weak_sim(const Lts &l1, const Lts &l2, bool rooted) {
    Lts sat2 = detail::saturate(l2);
    const size_t n1 = static_cast<size_t>(l1.num_states), n2 = static_cast<size_t>(l2.num_states);
    // defender moves, grouped by label
    std::map<std::pair<std::string, std::string>, std::vector<std::vector<int>>> def;
    for (const auto &e : sat2.edges) {
        auto &m = def[{e.act, e.data}];
        if (m.empty()) m.resize(n2);
        m[static_cast<size_t>(e.src)].push_back(e.dst);
    }
    std::vector<std::vector<bool>> rel(n1, std::vector<bool>(n2, true));
    bool changed = true;
    while (changed) {
        changed = false;
        for (size_t p = 0; p < n1; ++p)
            for (size_t q = 0; q < n2; ++q) {
                if (!rel[p][q]) continue;
                bool ok = true;
                for (const auto &e : l1.edges) {
                    if (static_cast<size_t>(e.src) != p) continue;
                    auto it = def.find({e.act, e.data});
                    bool matched = false;
                    if (it != def.end())
                        for (int q2 : it->second[q])
                            if (rel[static_cast<size_t>(e.dst)][static_cast<size_t>(q2)]) {
                                matched = true;
                                break;
                            }
                    if (!matched) {
                        ok = false;
                        break;
                    }
                }
                if (!ok) {
                    rel[p][q] = false;
                    changed = true;
                }
            }
    }
    BisimReport r;
    r.kind = "weak-sim";
    r.rooted = rooted;
    r.holds = rel[static_cast<size_t>(l1.initial)][static_cast<size_t>(l2.initial)];
    if (r.holds) {
        for (size_t p = 0; p < n1; ++p)
            for (size_t q = 0; q < n2; ++q)
                if (rel[p][q]) r.witness.push_back({static_cast<int>(p), static_cast<int>(q)});
    } else {
        // replay the removal of the root pair to find a challenger move
        for (const auto &e : l1.edges)
            if (e.src == l1.initial) {
                auto it = def.find({e.act, e.data});
                bool matched = false;
                if (it != def.end())
                    for (int q2 : it->second[static_cast<size_t>(l2.initial)])
                        if (rel[static_cast<size_t>(e.dst)][static_cast<size_t>(q2)]) matched = true;
                if (!matched) {
                    r.counterexample = "challenger move " + e.label() + " cannot be simulated";
                    break;
                }
            }
        if (r.counterexample.empty()) r.counterexample = "root pair not in greatest simulation";
    }
    return r;
}

// One-pass validator for a claimed (bi)simulation relation.
inline bool validate_bisimulation(const Lts &l1, const Lts &l2,
                                  const std::vector<std::pair<int, int>> &relation, bool weak,
                                  bool bidirectional) {
    Lts a = weak ? detail::saturate(l1) : l1;
    Lts b = weak ? detail::saturate(l2) : l2;
    std::set<std::pair<int, int>> rel(relation.begin(), relation.end());
    auto simulated = [&](const Lts &challenger, const Lts &defender, bool flip) {
        for (const auto &pr : rel) {
            int p = flip ? pr.second : pr.first;
            int q = flip ? pr.first : pr.second;
            for (const auto &e : challenger.edges) {
                if (e.src != p) continue;
                bool matched = false;
                for (const auto &f : defender.edges) {
                    if (f.src != q || f.act != e.act || f.data != e.data) continue;
                    if (rel.count(flip ? std::make_pair(f.dst, e.dst) : std::make_pair(e.dst, f.dst))) {
                        matched = true;
                        break;
                    }
                }
                if (!matched) return false;
            }
        }
        return true;
    };
    if (!simulated(a, b, false)) return false;
    if (bidirectional && !simulated(b, a, true)) return false;
    return true;
}

}  // namespace tjn
