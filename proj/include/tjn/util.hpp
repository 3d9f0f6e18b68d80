#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace tjn {

struct error : std::runtime_error {
    explicit error(const std::string &what) : std::runtime_error(what) {}
};

// Deterministic RNG with identical output on every platform, unlike
// std::uniform_int_distribution.
struct SplitMix64 {
    uint64_t state;
    explicit SplitMix64(uint64_t seed) : state(seed) {}
    uint64_t next() {
        uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    // uniform in [0, n)
    uint64_t below(uint64_t n) { return n == 0 ? 0 : next() % n; }
    template <typename T>
    const T &pick(const std::vector<T> &v) {
        if (v.empty()) throw error("pick from empty vector");
        return v[static_cast<size_t>(below(v.size()))];
    }
    template <typename T>
    void shuffle(std::vector<T> &v) {
        for (size_t i = v.size(); i > 1; --i)
            std::swap(v[i - 1], v[static_cast<size_t>(below(i))]);
    }
};

template <typename It>
std::string join(It begin, It end, const std::string &sep) {
    std::ostringstream os;
    for (It it = begin; it != end; ++it) {
        if (it != begin) os << sep;
        os << *it;
    }
    return os.str();
}

template <typename C>
std::string join(const C &c, const std::string &sep) {
    return join(c.begin(), c.end(), sep);
}

template <typename T>
std::set<T> set_union(const std::set<T> &a, const std::set<T> &b) {
    std::set<T> r = a;
    r.insert(b.begin(), b.end());
    return r;
}

template <typename T>
std::set<T> set_minus(const std::set<T> &a, const std::set<T> &b) {
    std::set<T> r;
    for (const auto &x : a)
        if (!b.count(x)) r.insert(x);
    return r;
}

template <typename T>
std::set<T> set_intersect(const std::set<T> &a, const std::set<T> &b) {
    std::set<T> r;
    for (const auto &x : a)
        if (b.count(x)) r.insert(x);
    return r;
}

template <typename T>
bool is_subset(const std::set<T> &a, const std::set<T> &b) {
    return std::all_of(a.begin(), a.end(), [&](const T &x) { return b.count(x) > 0; });
}

}  // namespace tjn
