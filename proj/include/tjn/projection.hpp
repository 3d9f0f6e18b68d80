#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "tjn/core.hpp"
#include "tjn/equivalence.hpp"
#include "tjn/util.hpp"

namespace tjn {

// Suffix appended to projected place ids: '#' sorts below alphanumerics, so
// the renaming preserves the relative order of distinct base names and
// canonical state spaces stay aligned across a net and its reconstruction.
inline std::string type_signature(const std::vector<std::string> &types) {
    return join(types, "+");
}

inline Net project(const Net &net, const std::set<std::string> &upsilon) {
    if (upsilon.empty()) throw error("projection needs a nonempty type set");
    for (const auto &ty : upsilon)
        if (std::find(net.types.begin(), net.types.end(), ty) == net.types.end())
            throw error("unknown type " + ty);
    std::vector<std::string> u = godel_sorted(net, upsilon);
    const std::string sig = "#" + type_signature(u);

    Net out;
    out.types = u;
    for (const auto &[v, ty] : net.variables)
        if (upsilon.count(ty)) out.variables[v] = ty;

    std::map<std::string, std::string> renamed;  // original place -> projected place
    for (const auto &[p, pt] : net.places) {
        std::set<std::string> ts(pt.begin(), pt.end());
        if (!is_subset(upsilon, ts)) continue;
        renamed[p] = p + sig;
        out.places[p + sig] = u;
    }
    for (const auto &t : net.transitions) {
        bool adjacent = false;
        for (const auto &[arc, ins] : net.arcs)
            adjacent |= (arc.first == t && renamed.count(arc.second)) ||
                        (arc.second == t && renamed.count(arc.first));
        if (adjacent) out.transitions.insert(t);
    }
    for (const auto &[arc, ins] : net.arcs) {
        const bool from_place = renamed.count(arc.first) > 0;
        const bool to_place = renamed.count(arc.second) > 0;
        if (!from_place && !to_place) continue;
        const std::string from = from_place ? renamed.at(arc.first) : arc.first;
        const std::string to = to_place ? renamed.at(arc.second) : arc.second;
        if (!from_place && !out.transitions.count(from)) continue;
        if (!to_place && !out.transitions.count(to)) continue;
        Inscription restricted;
        for (const auto &[vec, n] : ins) {
            VarVector kept;
            for (const auto &v : vec)
                if (upsilon.count(var_type(net, v))) kept.push_back(v);
            if (!kept.empty()) restricted[kept] += n;
        }
        if (!restricted.empty()) out.arcs[{from, to}] = restricted;
    }
    return out;
}

// Component-wise union. Shared elements are matched by id and must agree on
// their data; retyped copies produced by project() stay distinct through the
// place renaming.
inline Net compose(const Net &a, const Net &b) {
    Net out = a;
    for (const auto &ty : b.types)
        if (std::find(out.types.begin(), out.types.end(), ty) == out.types.end())
            out.types.push_back(ty);
    std::sort(out.types.begin(), out.types.end());
    for (const auto &[v, ty] : b.variables) {
        auto [it, fresh] = out.variables.emplace(v, ty);
        if (!fresh && it->second != ty)
            throw error("composition conflict: variable " + v + " typed " + it->second + " and " + ty);
    }
    for (const auto &[p, pt] : b.places) {
        auto [it, fresh] = out.places.emplace(p, pt);
        if (!fresh && it->second != pt)
            throw error("composition conflict: place " + p + " has two types");
    }
    out.transitions.insert(b.transitions.begin(), b.transitions.end());
    for (const auto &[arc, ins] : b.arcs) {
        auto [it, fresh] = out.arcs.emplace(arc, ins);
        if (!fresh && it->second != ins)
            throw error("composition conflict: arc (" + arc.first + "," + arc.second +
                        ") has two inscriptions");
    }
    return out;
}

// Pairs (p, q) with p minor to q: equal pre/postsets, strictly smaller type,
// and p's inscriptions the type restriction of q's.
inline std::set<std::pair<std::string, std::string>> minor_pairs(const Net &net) {
    std::set<std::pair<std::string, std::string>> out;
    auto restricted = [&](const Inscription &full, const std::set<std::string> &types) {
        Inscription r;
        for (const auto &[vec, n] : full) {
            VarVector kept;
            for (const auto &v : vec)
                if (types.count(var_type(net, v))) kept.push_back(v);
            if (!kept.empty()) r[kept] += n;
        }
        return r;
    };
    for (const auto &[p, pt] : net.places)
        for (const auto &[q, qt] : net.places) {
            if (p == q) continue;
            std::set<std::string> pts(pt.begin(), pt.end()), qts(qt.begin(), qt.end());
            if (!is_subset(pts, qts) || pts.size() >= qts.size()) continue;
            auto pre = preset(net, p), post = postset(net, p);
            if (pre != preset(net, q) || post != postset(net, q)) continue;
            bool ok = true;
            for (const auto &t : pre)
                ok &= *arc_inscription(net, t, p) == restricted(*arc_inscription(net, t, q), pts);
            for (const auto &t : post)
                ok &= *arc_inscription(net, p, t) == restricted(*arc_inscription(net, q, t), pts);
            if (ok) out.insert({p, q});
        }
    return out;
}

// Deletes minor places until none remain. The order is deterministic (Gödel
// order of the type, then id) but any order reaches the same fixpoint.
inline Net remove_minors(const Net &net) {
    Net out = net;
    for (;;) {
        auto pairs = minor_pairs(out);
        if (pairs.empty()) return out;
        std::vector<std::string> minors;
        for (const auto &[p, q] : pairs) minors.push_back(p);
        std::sort(minors.begin(), minors.end(), [&](const std::string &a, const std::string &b) {
            auto ta = join(out.places.at(a), ","), tb = join(out.places.at(b), ",");
            return ta != tb ? ta < tb : a < b;
        });
        const std::string victim = minors.front();
        out.places.erase(victim);
        for (auto it = out.arcs.begin(); it != out.arcs.end();)
            it = (it->first.first == victim || it->first.second == victim) ? out.arcs.erase(it)
                                                                           : std::next(it);
    }
}

// Composition of the projections on every nonempty type subset.
inline Net reconstruct(const Net &net, bool strip_minors = false, int max_types_guard = 8) {
    auto used = godel_sorted(net, used_types(net));
    if (static_cast<int>(used.size()) > max_types_guard)
        throw error("reconstruct guard: " + std::to_string(used.size()) + " types exceed the limit");
    Net out;
    bool first = true;
    const size_t n = used.size();
    for (size_t mask = 1; mask < (1u << n); ++mask) {
        std::set<std::string> upsilon;
        for (size_t i = 0; i < n; ++i)
            if (mask & (1u << i)) upsilon.insert(used[i]);
        Net proj = project(net, upsilon);
        out = first ? proj : compose(out, proj);
        first = false;
    }
    if (strip_minors) out = remove_minors(out);
    return out;
}

struct IsoModuloMinorsReport {
    bool holds = false;
    NodeBijection witness;
    std::set<std::pair<std::string, std::string>> minors_left, minors_right;
};

inline IsoModuloMinorsReport iso_modulo_minors(const Net &a, const Net &b) {
    IsoModuloMinorsReport r;
    r.minors_left = minor_pairs(a);
    r.minors_right = minor_pairs(b);
    auto iso = net_isomorphic(remove_minors(a), remove_minors(b));
    if (iso) {
        r.holds = true;
        r.witness = *iso;
    }
    return r;
}

}  // namespace tjn
