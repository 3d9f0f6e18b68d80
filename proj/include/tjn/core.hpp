#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tjn/util.hpp"

namespace tjn {

// A place type is an ordered vector of type labels, kept sorted by Gödel
// order (lexicographic rank of the type name within the net's declared
// types). Inscriptions are multisets of variable vectors; markings are
// multisets of identifier vectors.
using PlaceType = std::vector<std::string>;
using VarVector = std::vector<std::string>;
using IdVector = std::vector<std::string>;
using Inscription = std::map<VarVector, int>;   // vector -> multiplicity >= 1
using TokenBag = std::map<IdVector, int>;
using Arc = std::pair<std::string, std::string>;

struct Net {
    std::vector<std::string> types;              // declared order
    std::map<std::string, std::string> variables;  // name -> type
    std::map<std::string, PlaceType> places;     // id -> place type
    std::set<std::string> transitions;
    std::map<Arc, Inscription> arcs;

    bool is_place(const std::string &id) const { return places.count(id) > 0; }
    bool is_transition(const std::string &id) const { return transitions.count(id) > 0; }

    bool operator==(const Net &o) const = default;
};

// A marking maps each place to a multiset of identifier vectors. Places
// without tokens may be absent from the map.
struct Marking {
    std::map<std::string, TokenBag> tokens;

    int count(const std::string &place, const IdVector &v) const {
        auto p = tokens.find(place);
        if (p == tokens.end()) return 0;
        auto t = p->second.find(v);
        return t == p->second.end() ? 0 : t->second;
    }
    void add(const std::string &place, const IdVector &v, int n = 1) {
        tokens[place][v] += n;
    }
    void remove(const std::string &place, const IdVector &v, int n = 1) {
        auto p = tokens.find(place);
        if (p == tokens.end()) throw error("remove from empty place " + place);
        auto t = p->second.find(v);
        if (t == p->second.end() || t->second < n)
            throw error("remove of absent token from " + place);
        t->second -= n;
        if (t->second == 0) p->second.erase(t);
        if (p->second.empty()) tokens.erase(p);
    }
    bool empty() const { return tokens.empty(); }
    bool operator==(const Marking &o) const = default;
    auto operator<=>(const Marking &o) const = default;
};

inline int godel_rank(const Net &net, const std::string &type) {
    std::vector<std::string> sorted = net.types;
    std::sort(sorted.begin(), sorted.end());
    for (size_t i = 0; i < sorted.size(); ++i)
        if (sorted[i] == type) return static_cast<int>(i) + 1;
    throw error("unknown type " + type);
}

// Types sorted ascending by Gödel order.
inline std::vector<std::string> godel_sorted(const Net &net, std::set<std::string> ts) {
    std::vector<std::string> v(ts.begin(), ts.end());
    for (const auto &t : v) godel_rank(net, t);  // existence check
    std::sort(v.begin(), v.end());
    return v;
}

inline std::string var_type(const Net &net, const std::string &var) {
    auto it = net.variables.find(var);
    if (it == net.variables.end()) throw error("unknown variable " + var);
    return it->second;
}

inline std::vector<std::string> type_of_vector(const Net &net, const VarVector &v) {
    std::vector<std::string> r;
    r.reserve(v.size());
    for (const auto &x : v) r.push_back(var_type(net, x));
    return r;
}

// The unique variable of a type, under the t-JN variable/type bijection.
inline std::string var_of_type(const Net &net, const std::string &type) {
    std::optional<std::string> found;
    for (const auto &[name, t] : net.variables)
        if (t == type) {
            if (found) throw error("type " + type + " has several variables, no bijection");
            found = name;
        }
    if (!found) throw error("type " + type + " has no variable");
    return *found;
}

// Canonical variable vector for a place type, Gödel-ordered.
inline VarVector canonical_vector(const Net &net, const PlaceType &pt) {
    VarVector v;
    v.reserve(pt.size());
    for (const auto &t : pt) v.push_back(var_of_type(net, t));
    return v;
}

inline std::set<std::string> preset(const Net &net, const std::string &node) {
    std::set<std::string> r;
    for (const auto &[arc, ins] : net.arcs)
        if (arc.second == node) r.insert(arc.first);
    return r;
}

inline std::set<std::string> postset(const Net &net, const std::string &node) {
    std::set<std::string> r;
    for (const auto &[arc, ins] : net.arcs)
        if (arc.first == node) r.insert(arc.second);
    return r;
}

inline const Inscription *arc_inscription(const Net &net, const std::string &from,
                                          const std::string &to) {
    auto it = net.arcs.find({from, to});
    return it == net.arcs.end() ? nullptr : &it->second;
}

// --- variable sets (per transition) ---

struct VariableSets {
    std::set<std::string> in, out, all, emitting, collecting;
};

inline VariableSets variable_sets(const Net &net, const std::string &t) {
    if (!net.is_transition(t)) throw error("unknown transition " + t);
    VariableSets vs;
    for (const auto &[arc, ins] : net.arcs) {
        if (arc.second == t)
            for (const auto &[vec, n] : ins)
                for (const auto &x : vec) vs.in.insert(x);
        if (arc.first == t)
            for (const auto &[vec, n] : ins)
                for (const auto &x : vec) vs.out.insert(x);
    }
    vs.all = set_union(vs.in, vs.out);
    vs.emitting = set_minus(vs.out, vs.in);
    vs.collecting = set_minus(vs.in, vs.out);
    return vs;
}

inline std::set<std::string> types_of_vars(const Net &net, const std::set<std::string> &vars) {
    std::set<std::string> r;
    for (const auto &v : vars) r.insert(var_type(net, v));
    return r;
}

inline std::set<std::string> emitting_transitions(const Net &net, const std::string &type) {
    if (std::find(net.types.begin(), net.types.end(), type) == net.types.end())
        throw error("unknown type " + type);
    std::set<std::string> r;
    for (const auto &t : net.transitions)
        if (types_of_vars(net, variable_sets(net, t).emitting).count(type)) r.insert(t);
    return r;
}

inline std::set<std::string> collecting_transitions(const Net &net, const std::string &type) {
    if (std::find(net.types.begin(), net.types.end(), type) == net.types.end())
        throw error("unknown type " + type);
    std::set<std::string> r;
    for (const auto &t : net.transitions)
        if (types_of_vars(net, variable_sets(net, t).collecting).count(type)) r.insert(t);
    return r;
}

// Types actually used by the net's places.
inline std::set<std::string> used_types(const Net &net) {
    std::set<std::string> r;
    for (const auto &[id, pt] : net.places) r.insert(pt.begin(), pt.end());
    return r;
}

// --- markings ---

inline std::set<std::string> ids_in(const Marking &m) {
    std::set<std::string> r;
    for (const auto &[p, bag] : m.tokens)
        for (const auto &[vec, n] : bag) r.insert(vec.begin(), vec.end());
    return r;
}

// id -> type, inferred from place types positionally.
inline std::map<std::string, std::string> id_types(const Net &net, const Marking &m) {
    std::map<std::string, std::string> r;
    for (const auto &[p, bag] : m.tokens) {
        auto pl = net.places.find(p);
        if (pl == net.places.end()) throw error("marking mentions unknown place " + p);
        for (const auto &[vec, n] : bag) {
            if (vec.size() != pl->second.size())
                throw error("token arity mismatch in place " + p);
            for (size_t i = 0; i < vec.size(); ++i) {
                auto [it, fresh] = r.emplace(vec[i], pl->second[i]);
                if (!fresh && it->second != pl->second[i])
                    throw error("identifier " + vec[i] + " used with two types");
            }
        }
    }
    return r;
}

// Ids of one type present in a marking.
inline std::set<std::string> ids_of_type(const Net &net, const Marking &m,
                                         const std::string &type) {
    std::set<std::string> r;
    for (const auto &[id, t] : id_types(net, m))
        if (t == type) r.insert(id);
    return r;
}

// --- validation ---

inline std::vector<std::string> validate(const Net &net) {
    std::vector<std::string> report;
    std::set<std::string> declared(net.types.begin(), net.types.end());
    if (declared.size() != net.types.size()) report.push_back("duplicate type declaration");
    for (const auto &t : net.types)
        if (t.empty()) report.push_back("empty type name");
    for (const auto &[v, t] : net.variables)
        if (!declared.count(t)) report.push_back("variable " + v + " of undeclared type " + t);
    for (const auto &[p, pt] : net.places) {
        if (net.transitions.count(p)) report.push_back("node id used for place and transition: " + p);
        if (pt.empty()) report.push_back("place " + p + " has empty type (black tokens are not allowed)");
        std::set<std::string> seen;
        for (const auto &l : pt) {
            if (!declared.count(l)) report.push_back("place " + p + " uses undeclared type " + l);
            if (!seen.insert(l).second) report.push_back("place " + p + " repeats type " + l);
        }
        if (declared.size() == net.types.size() && seen.size() == pt.size()) {
            PlaceType sorted = pt;
            std::sort(sorted.begin(), sorted.end());
            if (sorted != pt)
                report.push_back("place " + p + " type not in Gödel order");
        }
    }
    for (const auto &[arc, ins] : net.arcs) {
        const auto &[from, to] = arc;
        const bool fp = net.is_place(from), ft = net.is_transition(from);
        const bool tp = net.is_place(to), tt = net.is_transition(to);
        if (!((fp && tt) || (ft && tp))) {
            report.push_back("arc (" + from + "," + to + ") does not connect place and transition");
            continue;
        }
        const std::string place = fp ? from : to;
        const PlaceType &pt = net.places.at(place);
        if (ins.empty()) report.push_back("arc (" + from + "," + to + ") has empty inscription");
        for (const auto &[vec, n] : ins) {
            if (n < 1) report.push_back("arc (" + from + "," + to + ") has non-positive multiplicity");
            bool ok = vec.size() == pt.size();
            for (size_t i = 0; ok && i < vec.size(); ++i) {
                auto vt = net.variables.find(vec[i]);
                if (vt == net.variables.end()) {
                    report.push_back("arc (" + from + "," + to + ") uses undeclared variable " + vec[i]);
                    ok = false;
                } else if (vt->second != pt[i]) {
                    ok = false;
                }
            }
            if (!ok && vec.size() != pt.size())
                report.push_back("arc (" + from + "," + to + ") inscription arity differs from type of " + place);
            else if (!ok)
                report.push_back("arc (" + from + "," + to + ") inscription type differs from type of " + place);
        }
    }
    return report;
}

inline void check_marking(const Net &net, const Marking &m) {
    for (const auto &[p, bag] : m.tokens) {
        auto pl = net.places.find(p);
        if (pl == net.places.end()) throw error("marking mentions unknown place " + p);
        for (const auto &[vec, n] : bag) {
            if (n < 1) throw error("non-positive token count in " + p);
            if (vec.size() != pl->second.size()) throw error("token arity mismatch in " + p);
        }
    }
    id_types(net, m);  // throws on cross-typed identifiers
}

// Convenience builder used by tests and fixtures: arcs get the canonical
// variable vector of the adjacent place (t-JN convention).
inline void add_arc(Net &net, const std::string &from, const std::string &to) {
    const std::string place = net.is_place(from) ? from : to;
    net.arcs[{from, to}] = {{canonical_vector(net, net.places.at(place)), 1}};
}

}  // namespace tjn
