#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tjn/classical.hpp"
#include "tjn/util.hpp"

namespace tjn {

// Jackson type expressions: atoms of place or transition sort combined with
// ; (sequence), || (parallel places), + (transition choice), # (self loop).
// Parentheses are mandatory, there is no operator precedence.
struct JExpr {
    enum Kind { Atom, Seq, Par, Choice, Loop };
    enum Sort { Unknown, PlaceSort, TransSort };
    Kind kind = Atom;
    Sort atom_sort = Unknown;  // atoms only; inferred from the leading letter when parsed
    std::string atom;
    std::vector<JExpr> kids;

    bool operator==(const JExpr &) const = default;
};

inline JExpr jatom(const std::string &name, JExpr::Sort sort) { return {JExpr::Atom, sort, name, {}}; }
inline JExpr jplace(const std::string &name) { return jatom(name, JExpr::PlaceSort); }
inline JExpr jtrans(const std::string &name) { return jatom(name, JExpr::TransSort); }
inline JExpr jbin(JExpr::Kind k, JExpr l, JExpr r) {
    JExpr e;
    e.kind = k;
    e.kids = {std::move(l), std::move(r)};
    return e;
}
inline JExpr jseq(JExpr l, JExpr r) { return jbin(JExpr::Seq, std::move(l), std::move(r)); }
inline JExpr jpar(JExpr l, JExpr r) { return jbin(JExpr::Par, std::move(l), std::move(r)); }
inline JExpr jchoice(JExpr l, JExpr r) { return jbin(JExpr::Choice, std::move(l), std::move(r)); }
inline JExpr jloop(JExpr body, JExpr redo) { return jbin(JExpr::Loop, std::move(body), std::move(redo)); }

inline std::string op_token(JExpr::Kind k) {
    switch (k) {
        case JExpr::Seq: return ";";
        case JExpr::Par: return "||";
        case JExpr::Choice: return "+";
        case JExpr::Loop: return "#";
        default: return "?";
    }
}

inline std::string print_jexpr(const JExpr &e) {
    if (e.kind == JExpr::Atom) return e.atom;
    auto operand = [](const JExpr &k) {
        return k.kind == JExpr::Atom ? print_jexpr(k) : "(" + print_jexpr(k) + ")";
    };
    return operand(e.kids[0]) + op_token(e.kind) + operand(e.kids[1]);
}

// --- parsing ---

struct parse_error : error {
    size_t position;
    parse_error(const std::string &what, size_t pos)
        : error(what + " at position " + std::to_string(pos)), position(pos) {}
};

namespace detail {

struct JParser {
    const std::string &text;
    size_t pos = 0;
    explicit JParser(const std::string &t) : text(t) {}

    void skip_ws() {
        while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t' || text[pos] == '\n')) ++pos;
    }
    bool ident_char(char c) const {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
               c == '_';
    }
    JExpr term() {
        skip_ws();
        if (pos >= text.size()) throw parse_error("expected expression", pos);
        if (text[pos] == '(') {
            ++pos;
            JExpr e = expr();
            skip_ws();
            if (pos >= text.size() || text[pos] != ')') throw parse_error("expected ')'", pos);
            ++pos;
            return e;
        }
        size_t start = pos;
        while (pos < text.size() && ident_char(text[pos])) ++pos;
        if (pos == start) throw parse_error("expected atom or '('", pos);
        std::string name = text.substr(start, pos - start);
        JExpr::Sort sort = name[0] == 'p'   ? JExpr::PlaceSort
                           : name[0] == 't' ? JExpr::TransSort
                                            : JExpr::Unknown;
        return jatom(name, sort);
    }
    JExpr expr() {
        JExpr left = term();
        skip_ws();
        if (pos >= text.size() || text[pos] == ')') return left;
        JExpr::Kind k;
        if (text[pos] == ';') {
            k = JExpr::Seq;
            ++pos;
        } else if (text[pos] == '+') {
            k = JExpr::Choice;
            ++pos;
        } else if (text[pos] == '#') {
            k = JExpr::Loop;
            ++pos;
        } else if (text.compare(pos, 2, "||") == 0) {
            k = JExpr::Par;
            pos += 2;
        } else {
            throw parse_error("expected operator", pos);
        }
        JExpr right = term();
        skip_ws();
        if (pos < text.size() && text[pos] != ')')
            throw parse_error("operators cannot chain without parentheses", pos);
        return jbin(k, std::move(left), std::move(right));
    }
};

}  // namespace detail

inline JExpr parse_jexpr(const std::string &text) {
    detail::JParser p(text);
    JExpr e = p.expr();
    p.skip_ws();
    if (p.pos != text.size()) throw parse_error("trailing input", p.pos);
    return e;
}

// --- sort checking ---

struct sort_error : error {
    explicit sort_error(const std::string &what) : error(what) {}
};

inline void flatten(const JExpr &e, JExpr::Kind k, std::vector<JExpr> &out) {
    if (e.kind == k) {
        flatten(e.kids[0], k, out);
        flatten(e.kids[1], k, out);
    } else {
        out.push_back(e);
    }
}

inline JExpr::Sort sort_of(const JExpr &e) {
    switch (e.kind) {
        case JExpr::Atom: {
            if (e.atom_sort == JExpr::Unknown)
                throw sort_error("cannot determine sort of atom '" + e.atom +
                                 "' (name places p..., transitions t...)");
            return e.atom_sort;
        }
        case JExpr::Seq: {
            std::vector<JExpr> elems;
            flatten(e, JExpr::Seq, elems);
            std::vector<JExpr::Sort> sorts;
            for (const auto &x : elems) sorts.push_back(sort_of(x));
            for (size_t i = 1; i < sorts.size(); ++i)
                if (sorts[i] == sorts[i - 1])
                    throw sort_error("sequence must alternate sorts in " + print_jexpr(e));
            if (sorts.front() != sorts.back())
                throw sort_error("sequence must start and end with the same sort in " + print_jexpr(e));
            return sorts.front();
        }
        case JExpr::Par:
            if (sort_of(e.kids[0]) != JExpr::PlaceSort || sort_of(e.kids[1]) != JExpr::PlaceSort)
                throw sort_error("|| needs two place-sort operands in " + print_jexpr(e));
            return JExpr::PlaceSort;
        case JExpr::Choice:
            if (sort_of(e.kids[0]) != JExpr::TransSort || sort_of(e.kids[1]) != JExpr::TransSort)
                throw sort_error("+ needs two transition-sort operands in " + print_jexpr(e));
            return JExpr::TransSort;
        case JExpr::Loop:
            if (sort_of(e.kids[0]) != JExpr::PlaceSort || sort_of(e.kids[1]) != JExpr::TransSort)
                throw sort_error("# needs a place-sort body and transition-sort redo in " +
                                 print_jexpr(e));
            return JExpr::PlaceSort;
    }
    throw sort_error("unreachable");
}

inline std::vector<std::string> jexpr_atoms(const JExpr &e) {
    std::vector<std::string> out;
    std::function<void(const JExpr &)> rec = [&](const JExpr &x) {
        if (x.kind == JExpr::Atom)
            out.push_back(x.atom);
        else
            for (const auto &k : x.kids) rec(k);
    };
    rec(e);
    return out;
}

// Sort-checks and enforces unique atom names.
inline JExpr::Sort check_jexpr(const JExpr &e) {
    auto atoms = jexpr_atoms(e);
    std::set<std::string> seen;
    for (const auto &a : atoms)
        if (!seen.insert(a).second) throw sort_error("atom '" + a + "' appears twice");
    return sort_of(e);
}

// --- normal form: brackets to the right, commutative operands sorted ---
// The loop associativity rule read literally would produce the ill-sorted
// subterm J1#J2; its sort-correct content is that stacked loops equal one
// loop with the redos folded into a choice, which is what both sides' nets
// look like. Nested loops therefore normalize to a single loop.

inline JExpr renest_right(JExpr::Kind k, std::vector<JExpr> elems) {
    JExpr acc = elems.back();
    for (size_t i = elems.size() - 1; i-- > 0;) acc = jbin(k, elems[i], std::move(acc));
    return acc;
}

inline JExpr normal_form(const JExpr &e) {
    if (e.kind == JExpr::Atom) return e;
    if (e.kind == JExpr::Loop) {
        JExpr body = normal_form(e.kids[0]);
        std::vector<JExpr> redos{normal_form(e.kids[1])};
        while (body.kind == JExpr::Loop) {
            redos.push_back(body.kids[1]);
            JExpr inner = body.kids[0];
            body = std::move(inner);
        }
        if (redos.size() == 1) return jloop(std::move(body), std::move(redos[0]));
        std::vector<JExpr> choice_elems;
        for (const auto &r : redos) flatten(r, JExpr::Choice, choice_elems);
        std::sort(choice_elems.begin(), choice_elems.end(), [](const JExpr &a, const JExpr &b) {
            return print_jexpr(a) < print_jexpr(b);
        });
        return jloop(std::move(body), renest_right(JExpr::Choice, std::move(choice_elems)));
    }
    std::vector<JExpr> elems;
    flatten(e, e.kind, elems);
    for (auto &x : elems) x = normal_form(x);
    if (e.kind == JExpr::Par || e.kind == JExpr::Choice)
        std::sort(elems.begin(), elems.end(), [](const JExpr &a, const JExpr &b) {
            return print_jexpr(a) < print_jexpr(b);
        });
    return renest_right(e.kind, std::move(elems));
}

inline bool alg_equiv(const JExpr &a, const JExpr &b) {
    return print_jexpr(normal_form(a)) == print_jexpr(normal_form(b));
}

// --- Jackson type -> classical net (rules J1..J5 by structural recursion) ---

namespace detail {

struct Frag {
    std::set<std::string> entries, exits;
};

inline Frag build_net(const JExpr &e, ClassicalNet &net) {
    switch (e.kind) {
        case JExpr::Atom: {
            if (e.atom_sort == JExpr::PlaceSort)
                net.places.insert(e.atom);
            else
                net.transitions.insert(e.atom);
            return {{e.atom}, {e.atom}};
        }
        case JExpr::Seq: {
            std::vector<JExpr> elems;
            flatten(e, JExpr::Seq, elems);
            Frag first = build_net(elems[0], net);
            Frag prev = first;
            for (size_t i = 1; i < elems.size(); ++i) {
                Frag cur = build_net(elems[i], net);
                for (const auto &x : prev.exits)
                    for (const auto &y : cur.entries) net.arcs.insert({x, y});
                prev = cur;
            }
            return {first.entries, prev.exits};
        }
        case JExpr::Par:
        case JExpr::Choice: {
            Frag a = build_net(e.kids[0], net), b = build_net(e.kids[1], net);
            return {set_union(a.entries, b.entries), set_union(a.exits, b.exits)};
        }
        case JExpr::Loop: {
            Frag body = build_net(e.kids[0], net), redo = build_net(e.kids[1], net);
            for (const auto &x : body.exits)
                for (const auto &y : redo.entries) net.arcs.insert({x, y});
            for (const auto &x : redo.exits)
                for (const auto &y : body.entries) net.arcs.insert({x, y});
            return body;
        }
    }
    throw error("unreachable");
}

}  // namespace detail

inline ClassicalNet net_from_type(const JExpr &e) {
    if (check_jexpr(e) != JExpr::PlaceSort) throw sort_error("net_from_type needs a place-sort type");
    ClassicalNet net;
    detail::Frag f = detail::build_net(e, net);
    if (f.entries.size() == 1 && net.places.count(*f.entries.begin())) net.source = *f.entries.begin();
    if (f.exits.size() == 1 && net.places.count(*f.exits.begin())) net.sink = *f.exits.begin();
    return net;
}

// --- classical net -> Jackson type (backtracking over inverse J1..J5) ---

namespace detail {

struct RNet {
    std::map<std::string, JExpr> pl, tr;  // node id -> accumulated expression
    std::set<std::pair<std::string, std::string>> arcs;

    std::set<std::string> pre(const std::string &n) const {
        std::set<std::string> r;
        for (const auto &[a, b] : arcs)
            if (b == n) r.insert(a);
        return r;
    }
    std::set<std::string> post(const std::string &n) const {
        std::set<std::string> r;
        for (const auto &[a, b] : arcs)
            if (a == n) r.insert(b);
        return r;
    }
    std::string serial() const {
        std::string s;
        for (const auto &[id, e] : pl) s += "P" + id + "=" + print_jexpr(e) + ";";
        for (const auto &[id, e] : tr) s += "T" + id + "=" + print_jexpr(e) + ";";
        for (const auto &[a, b] : arcs) s += a + ">" + b + ";";
        return s;
    }
    void drop_node(const std::string &id) {
        pl.erase(id);
        tr.erase(id);
        for (auto it = arcs.begin(); it != arcs.end();)
            it = (it->first == id || it->second == id) ? arcs.erase(it) : std::next(it);
    }
};

struct ReduceSearch {
    std::set<std::string> failed;
    int budget = 200000;

    std::optional<JExpr> run(RNet net) {
        if (budget-- <= 0) return std::nullopt;
        if (net.tr.empty() && net.pl.size() == 1) return net.pl.begin()->second;
        std::string key = net.serial();
        if (failed.count(key)) return std::nullopt;

        // J3 inverse: absorb self-loop transitions
        for (const auto &[t, te] : net.tr) {
            auto pre = net.pre(t), post = net.post(t);
            if (pre.size() == 1 && pre == post) {
                const std::string p = *pre.begin();
                if (net.pl.count(p)) {
                    RNet next = net;
                    next.pl[p] = jloop(net.pl.at(p), te);
                    next.drop_node(t);
                    if (auto r = run(std::move(next))) return r;
                }
            }
        }
        // J4/J5 inverse: merge duplicate places / transitions
        auto try_merge = [&](const std::map<std::string, JExpr> &nodes, JExpr::Kind k,
                             bool places) -> std::optional<JExpr> {
            for (auto i = nodes.begin(); i != nodes.end(); ++i)
                for (auto j = std::next(i); j != nodes.end(); ++j) {
                    if (net.pre(i->first) != net.pre(j->first) ||
                        net.post(i->first) != net.post(j->first))
                        continue;
                    RNet next = net;
                    (places ? next.pl : next.tr)[i->first] = jbin(k, i->second, j->second);
                    next.drop_node(j->first);
                    if (auto r = run(std::move(next))) return r;
                }
            return std::nullopt;
        };
        if (auto r = try_merge(net.pl, JExpr::Par, true)) return r;
        if (auto r = try_merge(net.tr, JExpr::Choice, false)) return r;
        // J1 inverse: place-transition-place chain
        for (const auto &[t, te] : net.tr) {
            auto pre = net.pre(t), post = net.post(t);
            if (pre.size() != 1 || post.size() != 1 || pre == post) continue;
            const std::string p1 = *pre.begin(), p2 = *post.begin();
            if (!net.pl.count(p1) || !net.pl.count(p2)) continue;
            if (net.post(p1) != std::set<std::string>{t} || net.pre(p2) != std::set<std::string>{t})
                continue;
            RNet next = net;
            JExpr merged = jseq(net.pl.at(p1), jseq(te, net.pl.at(p2)));
            auto reattach = net.post(p2);
            next.drop_node(t);
            next.drop_node(p2);
            next.pl[p1] = merged;
            for (const auto &y : reattach) next.arcs.insert({p1, y});
            if (auto r = run(std::move(next))) return r;
        }
        // J2 inverse: transition-place-transition chain
        for (const auto &[p, pe] : net.pl) {
            auto pre = net.pre(p), post = net.post(p);
            if (pre.size() != 1 || post.size() != 1 || pre == post) continue;
            const std::string t1 = *pre.begin(), t2 = *post.begin();
            if (!net.tr.count(t1) || !net.tr.count(t2)) continue;
            if (net.post(t1) != std::set<std::string>{p} || net.pre(t2) != std::set<std::string>{p})
                continue;
            RNet next = net;
            JExpr merged = jseq(net.tr.at(t1), jseq(pe, net.tr.at(t2)));
            auto reattach = net.post(t2);
            next.drop_node(p);
            next.drop_node(t2);
            next.tr[t1] = merged;
            for (const auto &y : reattach) next.arcs.insert({t1, y});
            if (auto r = run(std::move(next))) return r;
        }
        failed.insert(key);
        return std::nullopt;
    }
};

}  // namespace detail

inline std::optional<JExpr> reduce_to_type(const ClassicalNet &net) {
    detail::RNet r;
    for (const auto &p : net.places) r.pl[p] = jplace(p);
    for (const auto &t : net.transitions) r.tr[t] = jtrans(t);
    r.arcs = net.arcs;
    detail::ReduceSearch search;
    return search.run(std::move(r));
}

}  // namespace tjn
