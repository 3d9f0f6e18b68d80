#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "tjn/util.hpp"

namespace tjn {

// An edge label is an action (transition id or tau) plus an optional data
// part (the canonical binding). Tau edges carry no data.
inline const std::string kTau = "\xcf\x84";  // "τ"

struct LtsEdge {
    int src = 0;
    std::string act;
    std::string data;
    int dst = 0;
    bool tau() const { return act == kTau; }
    std::string label() const { return data.empty() ? act : act + " " + data; }
    auto operator<=>(const LtsEdge &) const = default;
};

struct Lts {
    int initial = 0;
    int num_states = 0;
    std::vector<LtsEdge> edges;
    std::vector<std::string> state_names;  // optional, for DOT export and debugging
    bool truncated = false;
};

inline Lts hide(const Lts &lts, const std::set<std::string> &acts) {
    Lts r = lts;
    for (auto &e : r.edges)
        if (acts.count(e.act)) {
            e.act = kTau;
            e.data.clear();
        }
    return r;
}

// Renames edge labels as (act, data) pairs. The map must be injective on
// labels that stay visible; unmapped labels are kept.
inline Lts rename(const Lts &lts,
                  const std::map<std::pair<std::string, std::string>,
                                 std::pair<std::string, std::string>> &r) {
    std::map<std::pair<std::string, std::string>, std::pair<std::string, std::string>> inv;
    for (const auto &[from, to] : r) {
        if (to.first == kTau) continue;
        if (!inv.emplace(to, from).second)
            throw error("rename map not injective on visible labels");
    }
    Lts out = lts;
    for (auto &e : out.edges) {
        auto it = r.find({e.act, e.data});
        if (it != r.end()) {
            e.act = it->second.first;
            e.data = it->second.second;
            if (e.tau()) e.data.clear();
        }
    }
    return out;
}

inline std::set<std::string> lts_actions(const Lts &lts) {
    std::set<std::string> r;
    for (const auto &e : lts.edges)
        if (!e.tau()) r.insert(e.act);
    return r;
}

}  // namespace tjn
