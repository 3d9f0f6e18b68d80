#pragma once

#include <set>
#include <string>
#include <vector>

#include "tjn/io.hpp"
#include "tjn/lts.hpp"

// Test-side helpers: fixture loading and independent oracles. The oracles
// here deliberately avoid the library's algorithms.

inline std::string data_path(const std::string &name) {
    return std::string(TJN_DATA_DIR) + "/" + name;
}

inline tjn::Net load_fixture(const std::string &name) {
    return tjn::load_net(data_path(name));
}

// Naive greatest-fixpoint bisimulation: start from all state pairs and chip
// away. Oracle for the partition-refinement implementation.
inline bool naive_bisim(const tjn::Lts &a, const tjn::Lts &b) {
    const int n1 = a.num_states, n2 = b.num_states;
    std::vector<std::vector<bool>> rel(static_cast<size_t>(n1),
                                       std::vector<bool>(static_cast<size_t>(n2), true));
    bool changed = true;
    while (changed) {
        changed = false;
        for (int p = 0; p < n1; ++p)
            for (int q = 0; q < n2; ++q) {
                if (!rel[static_cast<size_t>(p)][static_cast<size_t>(q)]) continue;
                bool ok = true;
                for (const auto &e : a.edges) {
                    if (e.src != p) continue;
                    bool m = false;
                    for (const auto &f : b.edges)
                        if (f.src == q && f.act == e.act && f.data == e.data &&
                            rel[static_cast<size_t>(e.dst)][static_cast<size_t>(f.dst)])
                            m = true;
                    if (!m) { ok = false; break; }
                }
                if (ok)
                    for (const auto &f : b.edges) {
                        if (f.src != q) continue;
                        bool m = false;
                        for (const auto &e : a.edges)
                            if (e.src == p && e.act == f.act && e.data == f.data &&
                                rel[static_cast<size_t>(e.dst)][static_cast<size_t>(f.dst)])
                                m = true;
                        if (!m) { ok = false; break; }
                    }
                if (!ok) {
                    rel[static_cast<size_t>(p)][static_cast<size_t>(q)] = false;
                    changed = true;
                }
            }
    }
    return rel[static_cast<size_t>(a.initial)][static_cast<size_t>(b.initial)];
}

inline std::set<std::vector<std::string>> traces_of(const tjn::EventLog &log) {
    return log.trace_set();
}

inline tjn::EventLog make_log(const std::vector<std::vector<std::string>> &traces,
                              const std::vector<std::string> &types = {"x"}) {
    tjn::EventLog log;
    log.types = types;
    int c = 0;
    for (const auto &t : traces) {
        tjn::LogTrace lt;
        lt.case_ids = {"c" + std::to_string(c++)};
        lt.events = t;
        log.traces.insert(lt);
    }
    return log;
}
