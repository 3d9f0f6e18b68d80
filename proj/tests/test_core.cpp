#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "tjn/core.hpp"
#include "tjn/io.hpp"
#include "tjn/rules.hpp"

using namespace tjn;

TEST_CASE("validate accepts the two-type net") {
    Net net = load_fixture("twotype.net");
    CHECK(validate(net).empty());
}

TEST_CASE("validate flags a typing violation") {
    Net net = load_fixture("twotype.net");
    net.arcs[{"c", "p3"}] = {{{"x"}, 1}};  // p3 carries <x,y> pairs
    auto report = validate(net);
    REQUIRE_FALSE(report.empty());
    bool mentions = false;
    for (const auto &line : report) mentions |= line.find("(c,p3)") != std::string::npos;
    CHECK(mentions);
}

TEST_CASE("validate accepts the empty net") {
    Net net;
    CHECK(validate(net).empty());
}

TEST_CASE("validate flags unsorted place types and black tokens") {
    Net net;
    net.types = {"x", "y"};
    net.variables = {{"x", "x"}, {"y", "y"}};
    net.places["p"] = {"y", "x"};
    CHECK_FALSE(validate(net).empty());
    net.places["p"] = {};
    CHECK_FALSE(validate(net).empty());
}

TEST_CASE("variable sets on the two-type net") {
    Net net = load_fixture("twotype.net");
    auto c = variable_sets(net, "c");
    CHECK(c.in == std::set<std::string>{"x"});
    CHECK(c.out == std::set<std::string>{"x", "y"});
    CHECK(c.emitting == std::set<std::string>{"y"});
    CHECK(c.collecting.empty());
    auto d = variable_sets(net, "d");
    CHECK(d.in == std::set<std::string>{"x", "y"});
    CHECK(d.out == std::set<std::string>{"x"});
    CHECK(d.emitting.empty());
    CHECK(d.collecting == std::set<std::string>{"y"});
    CHECK_THROWS_AS(variable_sets(net, "nope"), error);
}

TEST_CASE("variable sets of an isolated transition are empty") {
    Net net;
    net.transitions.insert("t");
    auto vs = variable_sets(net, "t");
    CHECK(vs.in.empty());
    CHECK(vs.out.empty());
    CHECK(vs.all.empty());
    CHECK(vs.emitting.empty());
    CHECK(vs.collecting.empty());
}

TEST_CASE("emitting and collecting transitions per type") {
    Net net = load_fixture("twotype.net");
    CHECK(emitting_transitions(net, "y") == std::set<std::string>{"c"});
    CHECK(collecting_transitions(net, "y") == std::set<std::string>{"d"});
    CHECK(emitting_transitions(net, "x") == std::set<std::string>{"a"});
    CHECK(collecting_transitions(net, "x") == std::set<std::string>{"b"});
    CHECK_THROWS_AS(emitting_transitions(net, "zz"), error);

    Net bare;
    bare.types = {"x"};
    bare.variables = {{"x", "x"}};
    bare.transitions = {"t"};
    CHECK(emitting_transitions(bare, "x").empty());
    CHECK(collecting_transitions(bare, "x").empty());
}

TEST_CASE("ids_in unions identifiers over places") {
    Marking m;
    m.add("p3", {"x1", "y1"});
    CHECK(ids_in(m) == std::set<std::string>{"x1", "y1"});
    CHECK(ids_in(Marking{}).empty());
    Marking m2;
    m2.add("p1", {"x1"});
    m2.add("p2", {"x1"});
    CHECK(ids_in(m2) == std::set<std::string>{"x1"});
}

TEST_CASE("marking tokens must match the place type position-wise") {
    Net net = load_fixture("twotype.net");
    Marking ok;
    ok.add("p3", {"x1", "y1"});
    CHECK_NOTHROW(check_marking(net, ok));
    CHECK(id_types(net, ok).at("x1") == "x");
    CHECK(id_types(net, ok).at("y1") == "y");
    Marking cross;
    cross.add("p3", {"x1", "y1"});
    cross.add("p1", {"y1"});  // y1 reused with type x
    CHECK_THROWS_AS(check_marking(net, cross), error);
    Marking arity;
    arity.add("p3", {"x1"});
    CHECK_THROWS_AS(check_marking(net, arity), error);
}

TEST_CASE("godel order is the lexicographic rank of type names") {
    Net net = load_fixture("retailer.net");
    CHECK(godel_rank(net, "x") == 1);
    CHECK(godel_rank(net, "y") == 2);
    CHECK(godel_rank(net, "z") == 3);
    CHECK(godel_sorted(net, {"z", "x"}) == std::vector<std::string>{"x", "z"});
}

TEST_CASE("net file format round-trips") {
    for (const auto &name : {"twotype.net", "retailer.net", "chain_acbd.net", "diamond.net"}) {
        Net net = load_fixture(name);
        CHECK(parse_net(print_net(net)) == net);
    }
}

TEST_CASE("round-trip holds for generated nets") {
    for (uint64_t seed = 1; seed <= 25; ++seed) {
        Net net = generate_random_tjn(seed, {}).net;
        REQUIRE(validate(net).empty());
        CHECK(parse_net(print_net(net)) == net);
    }
}

TEST_CASE("variable set identities hold on generated nets") {
    for (uint64_t seed = 1; seed <= 25; ++seed) {
        Net net = generate_random_tjn(seed, {}).net;
        for (const auto &t : net.transitions) {
            auto vs = variable_sets(net, t);
            CHECK(vs.all == set_union(vs.in, vs.out));
            CHECK(set_intersect(vs.emitting, vs.collecting).empty());
        }
    }
}

TEST_CASE("marking format round-trips") {
    Marking m;
    m.add("p3", {"x1", "y1"});
    m.add("p1", {"x2"});
    m.add("p1", {"x2"});
    CHECK(parse_marking(print_marking(m)) == m);
}
