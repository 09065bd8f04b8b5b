#include "doctest.h"
#include "gen.hpp"
#include "mmnet/error.hpp"
#include "mmnet/net_text.hpp"
#include "mmnet/patterns.hpp"
#include "mmnet/runtime.hpp"
#include "seed.hpp"

using namespace mmnet;

namespace {

const std::string kNu = "\xCE\xBD";

Term mmdb(const std::string& local) { return Term::iri(std::string(kMmdbNamespace) + local); }

Tuple token(const std::string& id, const std::string& a) { return {Value::str(id), Value::oid(a)}; }

MMNet with_token(MMNet net, const std::string& place, Tuple t) {
  net.init.tokens.push_back({place, std::move(t)});
  return net;
}

MMNet filter_with(const std::string& tag) {
  MMNet net = with_token(filter_net(), "ch_in", token("i1", "a1"));
  net.init.storage = filter_seed({tag});
  return net;
}

MMNet splitter_with(int k) {
  MMNet net = with_token(splitter_net(), "ch_in", token("i1", "img1"));
  net.init.storage = splitter_seed(k);
  return net;
}

const Supply kNames{{"n", {Value::str("f0")}}};

}  // namespace

TEST_SUITE("runtime") {
  TEST_CASE("values_of") {
    CHECK(values_of(Snapshot{}).empty());
    Snapshot s;
    s.marking["P"].add(token("i1", "a1"));
    auto v = values_of(s);
    CHECK(v.count("i1"));
    CHECK(v.count("a1"));
    s.storage.objects.put_or_update("img9", demo_image(1, 0));
    v = values_of(s);
    CHECK(v.count("img9"));
    CHECK(v.count("human face"));
  }

  TEST_CASE("filter bindings") {
    MMNet net = filter_with("human");
    Snapshot s = initial_snapshot(net);
    CHECK(enabled_bindings(net, s, "Accept").size() == 1);
    CHECK(enabled_bindings(net, s, "Discard").empty());
    MMNet other = filter_with("landscape");
    Snapshot s2 = initial_snapshot(other);
    CHECK(enabled_bindings(other, s2, "Accept").empty());
    CHECK(enabled_bindings(other, s2, "Discard").size() == 1);
  }

  TEST_CASE("unsatisfiable guard") {
    MMNet net = parse_net(R"(net u
places { place P : str }
transitions { transition T { guard not true  in P [x] } }
init { token P ["a"] }
)");
    CHECK(enabled_bindings(net, initial_snapshot(net), "T").empty());
  }

  TEST_CASE("Start casts the count to int") {
    MMNet net = with_token(splitter_net(), "ch_in", token("i1", "a1"));
    net.init.storage.metadata.add({Term::literal("i1"), mmdb("faceCount"), Term::literal("3")});
    Snapshot s = initial_snapshot(net);
    auto bs = enabled_bindings(net, s, "Start");
    REQUIRE(bs.size() == 1);
    Snapshot after = fire(net, s, "Start", bs[0]);
    CHECK(after.tokens("counter").count({Value::str("i1"), Value::oid("a1"), Value::integer(3)}) ==
          1);
    // Start has no action.
    CHECK(after.storage == s.storage);
  }

  TEST_CASE("one Split iteration") {
    MMNet net = splitter_with(2);
    Snapshot s0 = initial_snapshot(net);
    Snapshot s1 = fire(net, s0, "Start", enabled_bindings(net, s0, "Start").at(0));
    auto splits = enabled_bindings(net, s1, "Split", kNames);
    REQUIRE(splits.size() == 2);
    for (const auto& b : splits) {
      CHECK(b.at("c") == Value::integer(2));
      Snapshot s2 = fire(net, s1, "Split", b);
      CHECK(s2.tokens("counter") ==
            Multiset<Tuple>{{{Value::str("i1"), Value::oid("img1"), Value::integer(1)}, 1}});
      const auto& outs = s2.tokens("out").entries();
      REQUIRE(outs.size() == 1);
      CHECK(outs.begin()->first[0].items().size() == 1);
      CHECK(s2.storage.objects.size() == s1.storage.objects.size() + 1);
      CHECK(s2.storage.metadata.size() == s1.storage.metadata.size() + 3 - 1);
      CHECK(s2.storage.objects.contains(b.at("nu_a").text()));
      CHECK(test::incoherent_views(net, s2).empty());
    }
  }

  TEST_CASE("missing supply") {
    MMNet net = splitter_with(1);
    Snapshot s0 = initial_snapshot(net);
    Snapshot s1 = fire(net, s0, "Start", enabled_bindings(net, s0, "Start").at(0));
    CHECK_THROWS_AS(enabled_bindings(net, s1, "Split"), NoSupply);
    LTS lts = explore(net, s0);
    CHECK(lts.errors.size() == 1);
  }

  TEST_CASE("firing outside the enabled set") {
    MMNet net = filter_with("landscape");
    Snapshot s = initial_snapshot(net);
    Binding b = enabled_bindings(net, s, "Discard").at(0);
    CHECK_THROWS_AS(fire(net, s, "Accept", b), NotEnabled);
    b["a"] = Value::oid("elsewhere");
    CHECK_THROWS_AS(fire(net, s, "Discard", b), NotEnabled);
    CHECK_THROWS_AS(fire(net, s, "Nope", b), UnknownTransition);
  }

  TEST_CASE("fresh values avoid the snapshot and each other") {
    MMNet net = parse_net(R"(net f
places { place P : str  place Q : str * oid }
transitions { transition T { fresh v : str, w : oid  in P [x]  out Q [v, w] } }
init { token P ["ν:str:0"]  token P ["ν:oid:1"] }
)");
    Snapshot s = initial_snapshot(net);
    for (const auto& b : enabled_bindings(net, s, "T")) {
      auto used = values_of(s);
      CHECK_FALSE(used.count(b.at("v").plain_text()));
      CHECK_FALSE(used.count(b.at("w").plain_text()));
      CHECK(b.at("v").plain_text() != b.at("w").plain_text());
      CHECK(b.at("v").text().rfind(kNu + ":str:", 0) == 0);
    }
  }

  TEST_CASE("canonical form") {
    Snapshot s;
    s.marking["P"].add({Value::str(kNu + ":str:7")});
    s.marking["P"].add({Value::oid(kNu + ":oid:4")});
    s.storage.metadata.add(
        {Term::literal(kNu + ":str:7"), mmdb("address"), Term::literal(kNu + ":oid:4")});
    s.storage.objects.put_or_update(kNu + ":oid:4", demo_image(0, 0));
    s.fresh_counter = 8;
    canonicalize(s);
    CHECK(s.fresh_counter == 2);
    CHECK(s.tokens("P").count({Value::oid(kNu + ":oid:0")}) == 1);
    CHECK(s.tokens("P").count({Value::str(kNu + ":str:1")}) == 1);
    CHECK(s.storage.objects.contains(kNu + ":oid:0"));
    CHECK(s.storage.metadata.contains(
        {Term::literal(kNu + ":str:1"), mmdb("address"), Term::literal(kNu + ":oid:0")}));
  }

  TEST_CASE("trivial LTS") {
    MMNet net = parse_net(R"(net t
places { place P : str  place Q : str }
transitions { transition T { in P [x]  out Q [x] } }
init { token P ["a"] }
)");
    LTS lts = explore(net, initial_snapshot(net));
    CHECK(lts.states.size() == 2);
    CHECK(lts.edges.size() == 1);
    CHECK_FALSE(lts.truncated.any());
    CHECK(lts.terminal_states() == std::vector<std::size_t>{1});
    CHECK(lts.path_to(1).at(0).transition == "T");
    CHECK(to_dot(lts).find("digraph") != std::string::npos);
  }

  TEST_CASE("splitter with two segments") {
    MMNet net = splitter_with(2);
    ExploreOptions opts;
    opts.supply = kNames;
    LTS lts = explore(net, initial_snapshot(net), opts);
    // Start, then one branch per choice of the first segment, each running
    // Split, Update, Split, Update, Finish2, Emit, Emit.
    CHECK(lts.states.size() == 16);
    CHECK(lts.edges.size() == 15);
    auto terms = lts.terminal_states();
    REQUIRE(terms.size() == 2);
    for (auto t : terms) {
      CHECK(lts.states[t].tokens("ch_out").size() == 2);
      auto path = lts.path_to(t);
      CHECK(path[path.size() - 3].transition == "Finish2");
      CHECK(path.back().transition == "Emit");
    }
    opts.canonicalize = true;
    CHECK(explore(net, initial_snapshot(net), opts).states.size() == 16);
  }

  TEST_CASE("canonicalization merges fresh-isomorphic states") {
    MMNet net = parse_net(R"(net loop
places { place P : str  place R : str }
transitions {
  transition Make { fresh v : str  in P [x]  out R [v] }
  transition Drop { in R [v]  out P ["t"] }
}
init { token P ["t"] }
)");
    ExploreOptions opts;
    opts.bounds.max_depth = 6;
    LTS exact = explore(net, initial_snapshot(net), opts);
    opts.canonicalize = true;
    LTS canon = explore(net, initial_snapshot(net), opts);
    CHECK(canon.states.size() == 2);
    CHECK_FALSE(canon.truncated.any());
    CHECK(exact.states.size() == 7);
    CHECK(exact.truncated.depth);
  }

  TEST_CASE("bounds are reported") {
    MMNet net = parse_net(R"(net grow
places { place P : str }
transitions { transition T { in P [x]  out P [x]  out P [x] } }
init { token P ["a"] }
)");
    ExploreOptions opts;
    opts.bounds.max_tokens_per_place = 3;
    LTS lts = explore(net, initial_snapshot(net), opts);
    CHECK(lts.truncated.tokens);
    opts = {};
    opts.bounds.max_states = 5;
    lts = explore(net, initial_snapshot(net), opts);
    CHECK(lts.truncated.states);
    CHECK(lts.states.size() == 5);
    CHECK(reachable_nonempty(net, initial_snapshot(net), "P").verdict == Verdict::Reachable);
  }

  TEST_CASE("reachability") {
    MMNet human = filter_with("human");
    auto r = reachable_nonempty(human, initial_snapshot(human), "ch_out");
    CHECK(r.verdict == Verdict::Reachable);
    REQUIRE(r.witness.size() == 1);
    CHECK(r.witness[0].transition == "Accept");

    MMNet land = filter_with("landscape");
    CHECK(reachable_nonempty(land, initial_snapshot(land), "ch_out").verdict ==
          Verdict::NotReachableWithinBounds);

    MMNet empty = parse_net("net e\nplaces { place P : str }\n");
    CHECK(reachable_nonempty(empty, initial_snapshot(empty), "P").verdict ==
          Verdict::NotReachableWithinBounds);
    CHECK_THROWS_AS(reachable_nonempty(empty, initial_snapshot(empty), "Nope"), UnknownPlace);
  }

  TEST_CASE("random firings follow the firing formula and keep views coherent") {
    test::Rng rng(test::seed() + 60);
    std::size_t steps = 0;
    for (int n = 0; n < 40; ++n) {
      MMNet net = parse_net(test::random_net_text(rng, {}));
      REQUIRE(validate(net).empty());
      test::random_walk(net, rng, 15, [&](const Snapshot& pre, const Firing& f, const Snapshot& post) {
        ++steps;
        const Transition& t = net.transition(f.transition);
        auto expected = test::firing_formula(net, pre, t, f.binding);
        CHECK(test::control_marking(net, post) == expected);
        CHECK(test::incoherent_views(net, post).empty());
        // Replaying is deterministic.
        CHECK(fire(net, pre, f.transition, f.binding).serialize() == post.serialize());
      });
    }
    CHECK(steps > 100);
  }

  TEST_CASE("explore matches a brute-force enumerator") {
    test::Rng rng(test::seed() + 61);
    test::RandomNetOptions o;
    o.views = false;
    o.growing = false;
    o.transitions = 2;
    for (int n = 0; n < 100; ++n) {
      MMNet net = parse_net(test::random_net_text(rng, o));
      auto oracle = test::brute_force_reachability(net);
      LTS lts = explore(net, initial_snapshot(net));
      REQUIRE_FALSE(lts.truncated.any());
      std::set<std::map<std::string, test::Bag>> got;
      for (const auto& s : lts.states) got.insert(test::control_marking(net, s));
      CHECK(got == oracle.states);
      CHECK(lts.states.size() == oracle.states.size());
      CHECK(lts.edges.size() == oracle.edges);
    }
  }

  TEST_CASE("parallel exploration equals serial exploration") {
    test::Rng rng(test::seed() + 62);
    for (int n = 0; n < 20; ++n) {
      MMNet net = parse_net(test::random_net_text(rng, {}));
      ExploreOptions opts;
      opts.bounds.max_states = 300;
      opts.bounds.max_tokens_per_place = 5;
      opts.canonicalize = test::coin(rng);
      CHECK(explore_parallel(net, initial_snapshot(net), opts) ==
            explore(net, initial_snapshot(net), opts));
    }
  }

  TEST_CASE("trace format") {
    MMNet net = filter_with("human");
    Snapshot s = initial_snapshot(net);
    Firing f = enabled_firings(net, s).at(0);
    Snapshot after = fire(net, s, f.transition, f.binding);
    std::string line = trace_line(1, f, after);
    CHECK(line.rfind("#1 Accept [", 0) == 0);
    CHECK(line.find("| ") != std::string::npos);
    CHECK(line.find("ch_out=1") != std::string::npos);
  }
}
