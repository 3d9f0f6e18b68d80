#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "tjn/discovery.hpp"
#include "tjn/eventlog.hpp"
#include "tjn/rules.hpp"

using namespace tjn;

namespace {
FiringSequence table1(const Net &net) {
    return firing_from_csv(net, read_file(data_path("retailer_table1.csv")));
}
}  // namespace

TEST_CASE("induced logs of the sample execution match the expected traces") {
    Net net = load_fixture("retailer.net");
    FiringSequence eta = table1(net);

    CHECK(traces_of(induced_log(net, eta, {"x"})) ==
          std::set<std::vector<std::string>>{{"A", "E", "B"}, {"A", "C", "D", "B"}});
    CHECK(traces_of(induced_log(net, eta, {"z"})) ==
          std::set<std::vector<std::string>>{{"T", "G", "Z", "V"}, {"T", "V"}});
    CHECK(traces_of(induced_log(net, eta, {"y", "z"})) ==
          std::set<std::vector<std::string>>{{"G", "Z"}});
    CHECK(traces_of(induced_log(net, eta, {"x", "y"})) ==
          std::set<std::vector<std::string>>{{"E"}});
    CHECK(traces_of(induced_log(net, eta, {"y"})) ==
          std::set<std::vector<std::string>>{{"G", "E", "H", "L", "J", "O", "K", "Z"}});
    // no firing binds x and z together
    CHECK(induced_log(net, eta, {"x", "z"}).traces.empty());
    CHECK(induced_log(net, eta, {"x", "y", "z"}).traces.empty());
    CHECK_THROWS_AS(induced_log(net, eta, {}), error);
}

TEST_CASE("case vectors are type-consistent and in godel order") {
    Net net = load_fixture("retailer.net");
    FiringSequence eta = table1(net);
    EventLog log = induced_log(net, eta, {"z", "y"});
    CHECK(log.types == std::vector<std::string>{"y", "z"});
    for (const auto &t : log.traces) {
        REQUIRE(t.case_ids.size() == 2);
        CHECK(t.case_ids[0] == "o1");
        CHECK(t.case_ids[1] == "c1");
    }
}

TEST_CASE("project_sequence keeps surviving transitions and restricts bindings") {
    Net net = load_fixture("retailer.net");
    FiringSequence eta = table1(net);
    CHECK(project_sequence(net, FiringSequence{}, {"z"}).records.empty());

    FiringSequence pz = project_sequence(net, eta, {"z"});
    // rows with a nonempty z column: T,G,T,V,Z,V
    std::vector<std::string> expect{"T", "G", "T", "V", "Z", "V"};
    REQUIRE(pz.records.size() == expect.size());
    for (size_t i = 0; i < expect.size(); ++i) {
        CHECK(pz.records[i].transition == expect[i]);
        for (const auto &[v, id] : pz.records[i].binding) CHECK(var_type(net, v) == "z");
    }
}

TEST_CASE("induced logs are stable under sequence projection") {
    Net net = load_fixture("retailer.net");
    FiringSequence eta = table1(net);
    for (const auto &upsilon :
         std::vector<std::set<std::string>>{{"x"}, {"y"}, {"z"}, {"y", "z"}, {"x", "y"}}) {
        EventLog direct = induced_log(net, eta, upsilon);
        EventLog via_proj = induced_log(net, project_sequence(net, eta, upsilon), upsilon);
        CHECK(direct.traces == via_proj.traces);
    }
}

TEST_CASE("sequence-projection stability holds on random runs") {
    for (uint64_t seed = 1; seed <= 10; ++seed) {
        GenParams params;
        params.max_nodes = 13;
        Net net = generate_random_tjn(seed, params).net;
        auto types = godel_sorted(net, used_types(net));
        if (types.empty()) continue;
        FiringSequence eta = run(net, Marking{}, 24, seed * 31);
        SplitMix64 rng(seed);
        std::set<std::string> upsilon{types[rng.below(types.size())]};
        if (types.size() > 1 && rng.below(2)) upsilon.insert(types[rng.below(types.size())]);
        EventLog direct = induced_log(net, eta, upsilon);
        EventLog via_proj = induced_log(net, project_sequence(net, eta, upsilon), upsilon);
        CHECK(direct.traces == via_proj.traces);
    }
}

TEST_CASE("generated_by replays every trace or reports the first failure") {
    Net net = load_fixture("retailer.net");
    FiringSequence eta = table1(net);
    // x-side projection closed into a workflow net
    Net proj = project(net, {"x"});
    ClassicalNet tb;
    for (const auto &[p, pt] : proj.places) tb.places.insert(p);
    tb.transitions = proj.transitions;
    for (const auto &[arc, ins] : proj.arcs) tb.arcs.insert(arc);
    ClassicalNet wf = closure(tb);
    CMarking m0{{*wf.source, 1}};

    CHECK(generated_by(EventLog{}, wf, m0).holds);
    EventLog logx = induced_log(net, eta, {"x"});
    CHECK(generated_by(logx, wf, m0).holds);

    EventLog bad = make_log({{"B", "A"}});
    auto r = generated_by(bad, wf, m0);
    CHECK_FALSE(r.holds);
    CHECK(r.failing_index == 0);  // B needs stock that does not exist yet
    EventLog unknown = make_log({{"A", "nope"}});
    CHECK_THROWS_AS(generated_by(unknown, wf, m0), error);
}

TEST_CASE("dfg basics") {
    Dfg single = dfg(make_log({{"a"}}));
    CHECK(single.starts == std::set<std::string>{"a"});
    CHECK(single.ends == std::set<std::string>{"a"});
    CHECK(single.edges.empty());

    Dfg g = dfg(make_log({{"a", "b", "c"}, {"a", "c", "b"}}));
    CHECK(g.starts == std::set<std::string>{"a"});
    CHECK(g.ends == std::set<std::string>{"b", "c"});
    CHECK(g.edges == std::set<std::pair<std::string, std::string>>{
                         {"a", "b"}, {"a", "c"}, {"b", "c"}, {"c", "b"}});
}

TEST_CASE("dfg is monotone in the trace set") {
    auto small = make_log({{"a", "b"}});
    auto big = make_log({{"a", "b"}, {"a", "c", "b"}});
    Dfg gs = dfg(small), gb = dfg(big);
    for (const auto &e : gs.edges) CHECK(gb.edges.count(e));
    for (const auto &s : gs.starts) CHECK(gb.starts.count(s));
}

TEST_CASE("exhaustive bounded simulation yields df-complete logs") {
    Net net = load_fixture("twotype.net");
    FiringSequence eta = exhaustive_complete_runs(net, 12);
    REQUIRE_FALSE(eta.records.empty());
    CHECK(replay(net, Marking{}, eta).ok);

    Net proj = project(net, {"x"});
    ClassicalNet tb;
    for (const auto &[p, pt] : proj.places) tb.places.insert(p);
    tb.transitions = proj.transitions;
    for (const auto &[arc, ins] : proj.arcs) tb.arcs.insert(arc);
    ClassicalNet wf = closure(tb);
    CMarking m0{{*wf.source, 1}};
    EventLog logx = induced_log(net, eta, {"x"});
    auto r = df_complete(logx, wf, m0);
    CHECK(r.holds);

    // dropping a trace loses df edges
    EventLog partial = logx;
    partial.traces.erase(partial.traces.begin());
    if (!partial.traces.empty()) {
        auto r2 = df_complete(partial, wf, m0);
        CHECK((r2.holds == (dfg(partial).edges == r.model_dfg.edges &&
                            dfg(partial).starts == r.model_dfg.starts &&
                            dfg(partial).ends == r.model_dfg.ends)));
    }
}

TEST_CASE("log files round-trip") {
    Net net = load_fixture("retailer.net");
    EventLog log = induced_log(net, table1(net), {"x"});
    EventLog back = parse_log(print_log(log));
    CHECK(back == log);
}
