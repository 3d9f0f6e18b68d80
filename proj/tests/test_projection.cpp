#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "tjn/projection.hpp"
#include "tjn/rules.hpp"
#include "tjn/semantics.hpp"

using namespace tjn;

namespace {

// The x-side of the two-type net: e drops out, p3 is retyped to <x>.
Net expected_proj_x() {
    Net n;
    n.types = {"x"};
    n.variables = {{"x", "x"}};
    for (const auto &p : {"p1", "p2", "px", "p4"}) n.places[p] = {"x"};
    n.transitions = {"a", "b", "c", "d"};
    add_arc(n, "a", "p1");
    add_arc(n, "a", "p2");
    add_arc(n, "p1", "c");
    add_arc(n, "p2", "b");
    add_arc(n, "p4", "b");
    add_arc(n, "d", "p4");
    add_arc(n, "c", "px");
    add_arc(n, "px", "d");
    return n;
}

// The y-side: a and b drop out.
Net expected_proj_y() {
    Net n;
    n.types = {"y"};
    n.variables = {{"y", "y"}};
    for (const auto &p : {"py", "p5", "p6"}) n.places[p] = {"y"};
    n.transitions = {"c", "d", "e"};
    add_arc(n, "c", "py");
    add_arc(n, "py", "d");
    add_arc(n, "c", "p5");
    add_arc(n, "p5", "e");
    add_arc(n, "e", "p6");
    add_arc(n, "p6", "d");
    return n;
}

// The interaction part: just c -> p_xy -> d.
Net expected_proj_xy() {
    Net n;
    n.types = {"x", "y"};
    n.variables = {{"x", "x"}, {"y", "y"}};
    n.places["pxy"] = {"x", "y"};
    n.transitions = {"c", "d"};
    add_arc(n, "c", "pxy");
    add_arc(n, "pxy", "d");
    return n;
}

}  // namespace

TEST_CASE("projections of the two-type net match the expected shapes") {
    Net net = load_fixture("twotype.net");
    Net px = project(net, {"x"});
    CHECK(validate(px).empty());
    REQUIRE(net_isomorphic(px, expected_proj_x()).has_value());
    CHECK(px.places.count("p3#x"));

    Net py = project(net, {"y"});
    CHECK(validate(py).empty());
    REQUIRE(net_isomorphic(py, expected_proj_y()).has_value());
    CHECK_FALSE(py.transitions.count("a"));
    CHECK_FALSE(py.transitions.count("b"));

    Net pxy = project(net, {"x", "y"});
    CHECK(validate(pxy).empty());
    REQUIRE(net_isomorphic(pxy, expected_proj_xy()).has_value());
    CHECK(pxy.places.size() == 1);

    CHECK_THROWS_AS(project(net, {}), error);
    CHECK_THROWS_AS(project(net, {"zz"}), error);
}

TEST_CASE("composition is idempotent and unions by identity") {
    Net net = load_fixture("twotype.net");
    CHECK(compose(net, net) == net);

    Net px = project(net, {"x"});
    Net py = project(net, {"y"});
    Net both = compose(px, py);
    CHECK(validate(both).empty());
    // both copies of the interaction place survive under their own names
    CHECK(both.places.count("p3#x"));
    CHECK(both.places.count("p3#y"));
    CHECK_FALSE(both.places.count("p3#x+y"));
    CHECK(both.places.at("p3#x") == PlaceType{"x"});
    CHECK(both.places.at("p3#y") == PlaceType{"y"});
}

TEST_CASE("composition rejects conflicting shared elements") {
    Net a, b;
    a.types = b.types = {"x", "y"};
    a.variables = b.variables = {{"x", "x"}, {"y", "y"}};
    a.places["p"] = {"x"};
    b.places["p"] = {"y"};
    CHECK_THROWS_AS(compose(a, b), error);
    b.places["p"] = {"x"};
    CHECK_NOTHROW(compose(a, b));
}

TEST_CASE("composing the two chains creates the blocking cycle") {
    Net n = load_fixture("chain_acbd.net");
    Net m = load_fixture("chain_abcd.net");
    Net u = compose(n, m);
    CHECK(validate(u).empty());
    // the cycle c -> q -> b -> s -> c
    CHECK(u.arcs.count({"c", "q"}));
    CHECK(u.arcs.count({"q", "b"}));
    CHECK(u.arcs.count({"b", "s"}));
    CHECK(u.arcs.count({"s", "c"}));
    CHECK(is_tjn(u).kind == TjnVerdict::NotTjn);
}

TEST_CASE("minor pairs of the full reconstruction") {
    Net net = load_fixture("twotype.net");
    Net recon = reconstruct(net);
    auto pairs = minor_pairs(recon);
    CHECK(pairs == std::set<std::pair<std::string, std::string>>{{"p3#x", "p3#x+y"},
                                                                 {"p3#y", "p3#x+y"}});
}

TEST_CASE("minor pairs of the diamond reconstruction") {
    Net recon = reconstruct(load_fixture("diamond.net"));
    auto pairs = minor_pairs(recon);
    CHECK(pairs == std::set<std::pair<std::string, std::string>>{{"p#x", "p#x+y"},
                                                                 {"p#y", "p#x+y"},
                                                                 {"q#x", "q#x+y"},
                                                                 {"q#y", "q#x+y"}});
}

TEST_CASE("nets without equal pre/post pairs have no minors") {
    CHECK(minor_pairs(load_fixture("twotype.net")).empty());
    CHECK(minor_pairs(load_fixture("chain_acbd.net")).empty());
}

TEST_CASE("remove_minors reaches the same fixpoint in any order") {
    Net net = load_fixture("twotype.net");
    Net recon = reconstruct(net);
    Net cleaned = remove_minors(recon);
    CHECK(minor_pairs(cleaned).empty());
    REQUIRE(net_isomorphic(cleaned, net).has_value());
    CHECK(remove_minors(net) == net);

    // shuffle test: delete minors in random order, compare the result
    SplitMix64 rng(17);
    for (int round = 0; round < 10; ++round) {
        Net cur = recon;
        for (;;) {
            auto pairs = minor_pairs(cur);
            if (pairs.empty()) break;
            std::vector<std::string> victims;
            for (const auto &[p, q] : pairs) victims.push_back(p);
            std::sort(victims.begin(), victims.end());
            victims.erase(std::unique(victims.begin(), victims.end()), victims.end());
            const std::string v = victims[rng.below(victims.size())];
            cur.places.erase(v);
            for (auto it = cur.arcs.begin(); it != cur.arcs.end();)
                it = (it->first.first == v || it->first.second == v) ? cur.arcs.erase(it)
                                                                     : std::next(it);
        }
        CHECK(cur == cleaned);
    }
}

TEST_CASE("reconstruct composes every nonempty type subset") {
    Net net = load_fixture("twotype.net");
    Net recon = reconstruct(net);
    CHECK(validate(recon).empty());
    // three projections: x, y, and the interaction
    CHECK(recon.places.size() == 4 + 3 + 1);
    auto r = iso_modulo_minors(recon, net);
    CHECK(r.holds);

    // a single-type net reconstructs to its own projection
    Net chain = load_fixture("chain_acbd.net");
    Net rchain = reconstruct(chain);
    CHECK(net_isomorphic(rchain, chain).has_value());
}

TEST_CASE("reconstruct guards the subset blow-up") {
    Net net;
    net.types = {"a", "b", "c", "d", "e", "f", "g", "h", "i"};
    for (const auto &t : net.types) net.variables[t] = t;
    for (const auto &t : net.types) net.places["pl_" + t] = {t};
    CHECK_THROWS_AS(reconstruct(net), error);
}

TEST_CASE("singleton projections alone do not reconstruct the net") {
    // the negative control: composing only the one-type projections loses the
    // interaction place
    Net net = load_fixture("twotype.net");
    Net singles = compose(project(net, {"x"}), project(net, {"y"}));
    CHECK_FALSE(iso_modulo_minors(singles, net).holds);
}

TEST_CASE("reconstruction state space is rooted strongly bisimilar, minors removed too") {
    Net net = load_fixture("twotype.net");
    Net recon = reconstruct(net);
    for (int k : {1, 2}) {
        Lts a = state_space(net, Marking{}, {k, 60000}).lts;
        Lts b = state_space(recon, Marking{}, {k, 60000}).lts;
        CHECK(strong_bisim(a, b, true).holds);
        Lts c = state_space(remove_minors(recon), Marking{}, {k, 60000}).lts;
        CHECK(strong_bisim(a, c, true).holds);
    }
}

TEST_CASE("compose is associative and commutative up to key equality") {
    SplitMix64 rng(3);
    for (uint64_t seed = 1; seed <= 10; ++seed) {
        GenParams params;
        params.max_nodes = 12;
        Net n = generate_random_tjn(seed, params).net;
        auto types = godel_sorted(n, used_types(n));
        if (types.empty()) continue;
        std::vector<Net> parts;
        for (const auto &ty : types) parts.push_back(project(n, {ty}));
        if (parts.size() < 2) continue;
        Net ab = compose(parts[0], parts[1]);
        Net ba = compose(parts[1], parts[0]);
        CHECK(ab == ba);
        if (parts.size() >= 3) {
            CHECK(compose(compose(parts[0], parts[1]), parts[2]) ==
                  compose(parts[0], compose(parts[1], parts[2])));
        }
    }
}

TEST_CASE("lemma: removing minors preserves rooted strong bisimilarity") {
    for (uint64_t seed = 1; seed <= 8; ++seed) {
        GenParams params;
        params.max_nodes = 12;
        Net net = generate_random_tjn(seed, params).net;
        if (used_types(net).empty()) continue;
        Net recon = reconstruct(net);
        Lts a = state_space(recon, Marking{}, {1, 30000}).lts;
        Lts b = state_space(remove_minors(recon), Marking{}, {1, 30000}).lts;
        CHECK(strong_bisim(a, b, true).holds);
    }
}
