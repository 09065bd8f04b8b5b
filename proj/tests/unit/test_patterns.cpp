#include "doctest.h"
#include "gen.hpp"
#include "mmnet/error.hpp"
#include "mmnet/patterns.hpp"
#include "mmnet/runtime.hpp"
#include "seed.hpp"

using namespace mmnet;

namespace {

Term mmdb(const std::string& local) { return Term::iri(std::string(kMmdbNamespace) + local); }

Tuple image_token() { return {Value::str("i1"), Value::oid("img1")}; }

MMNet seeded(MMNet net, StorageInstance storage, Tuple tok) {
  net.init.storage = std::move(storage);
  net.init.tokens.push_back({"ch_in", std::move(tok)});
  return net;
}

LTS run_all(const MMNet& net, bool canonical = false) {
  ExploreOptions opts;
  opts.supply = {{"n", {Value::str("f0")}}};
  opts.canonicalize = canonical;
  LTS lts = explore(net, initial_snapshot(net), opts);
  REQUIRE_FALSE(lts.truncated.any());
  REQUIRE(lts.errors.empty());
  return lts;
}

std::size_t count_pred(const MetadataGraph& g, const std::string& local) {
  return g.match(std::nullopt, mmdb(local), std::nullopt).size();
}

}  // namespace

TEST_SUITE("patterns") {
  TEST_CASE("splitter without faces") {
    MMNet net = seeded(splitter_net(), splitter_seed(0), image_token());
    LTS lts = run_all(net);
    auto terms = lts.terminal_states();
    REQUIRE(terms.size() == 1);
    const Snapshot& end = lts.states[terms[0]];
    CHECK(end.tokens("ch_out") == Multiset<Tuple>{{image_token(), 1}});
    CHECK(end.storage.objects == net.init.storage.objects);
    CHECK(lts.path_to(terms[0]).back().transition == "Finish1");
  }

  TEST_CASE("filter routes by tag") {
    for (const auto& [tags, routed] :
         std::vector<std::pair<std::vector<std::string>, bool>>{{{"human"}, true},
                                                                {{"product"}, true},
                                                                {{"landscape"}, false},
                                                                {{"landscape", "human"}, true}}) {
      MMNet net = seeded(filter_net(), filter_seed(tags), image_token());
      LTS lts = run_all(net);
      bool reached = false;
      for (const auto& s : lts.states) reached = reached || !s.tokens("ch_out").empty();
      CHECK(reached == routed);
      // Every complete run consumes the input.
      for (auto t : lts.terminal_states()) CHECK(lts.states[t].tokens("ch_in").empty());
    }
  }

  TEST_CASE("filter partitions its input") {
    // Each (id, tag) row enables exactly one of Accept and Discard.
    MMNet net = filter_net({{"human", "cat"}});
    for (const auto& tag : {"human", "cat", "dog", "product"}) {
      MMNet n = seeded(net, filter_seed({tag}), image_token());
      Snapshot s = initial_snapshot(n);
      std::size_t a = enabled_bindings(n, s, "Accept").size();
      std::size_t d = enabled_bindings(n, s, "Discard").size();
      CHECK(a + d == 1);
      CHECK((a == 1) == (std::string(tag) == "human" || std::string(tag) == "cat"));
    }
    CHECK_THROWS_AS(filter_net({{}}), TypeMismatch);
  }

  TEST_CASE("filter deadlocks without tags") {
    MMNet net = seeded(filter_net(), filter_seed({}), image_token());
    Snapshot s = initial_snapshot(net);
    CHECK(enabled_firings(net, s).empty());
  }

  TEST_CASE("enricher") {
    std::string key = std::string(kMmdbNamespace) + "faceSegment";
    Tuple tok{Value::str(key), Value::str("i1"), Value::oid("img1")};
    MMNet net = seeded(enricher_net(), enricher_seed(1), tok);
    LTS lts = run_all(net);
    for (auto t : lts.terminal_states()) {
      const auto& img = lts.states[t].storage.objects.src("img1");
      REQUIRE(img.decorations.size() == 1);
      CHECK(img.decorations[0] == Decoration{"oval", "red", demo_face_boxes(1)[0]});
      CHECK(lts.states[t].tokens("ch_out").size() == 1);
    }

    MMNet two = seeded(enricher_net(), enricher_seed(2), tok);
    Snapshot s = initial_snapshot(two);
    s = fire(two, s, "T", enabled_bindings(two, s, "T").at(0));
    CHECK(enabled_bindings(two, s, "Get Segment").size() == 2);

    MMNet none = seeded(enricher_net(), enricher_seed(0), tok);
    CHECK(reachable_nonempty(none, initial_snapshot(none), "ch_out").verdict ==
          Verdict::NotReachableWithinBounds);

    MMNet custom = seeded(enricher_net({"rect", "blue"}), enricher_seed(1), tok);
    LTS lc = run_all(custom);
    CHECK(lc.states[lc.terminal_states().at(0)].storage.objects.src("img1").decorations.at(0).shape ==
          "rect");
  }

  TEST_CASE("detector") {
    MMNet net = seeded(detector_net(), detector_seed(2, 1), image_token());
    LTS lts = run_all(net);
    for (auto t : lts.terminal_states()) {
      const auto& g = lts.states[t].storage.metadata;
      CHECK(g.contains({Term::literal("i1"), mmdb("faceCount"), Term::literal("2")}));
      CHECK(g.contains({Term::literal("i1"), mmdb("prodCount"), Term::literal("1")}));
      CHECK(count_pred(g, "faceSegment") == 2);
      CHECK(count_pred(g, "prodSegment") == 1);
    }

    MMNet empty = seeded(detector_net(), detector_seed(0, 0), image_token());
    LTS le = run_all(empty);
    auto terms = le.terminal_states();
    REQUIRE(terms.size() == 1);
    const auto& end = le.states[terms[0]];
    CHECK(end.storage.metadata.contains({Term::literal("i1"), mmdb("faceCount"), Term::literal("0")}));
    CHECK(end.storage.metadata.contains({Term::literal("i1"), mmdb("prodCount"), Term::literal("0")}));
    CHECK(end.storage.metadata.size() == 2);
    CHECK(end.tokens("ch_out") == Multiset<Tuple>{{image_token(), 1}});
  }

  TEST_CASE("detector then splitter") {
    MMNet net = compose(detector_net(), splitter_net());
    CHECK(validate(net).empty());
    net = seeded(net, detector_seed(2, 0), image_token());
    LTS lts = run_all(net, true);
    for (auto t : lts.terminal_states()) CHECK(lts.states[t].tokens("ch_out").size() == 2);
  }

  TEST_CASE("composition") {
    MMNet f = filter_net();
    MMNet e = with_key_adapter(enricher_net(), std::string(kMmdbNamespace) + "faceSegment");
    CHECK(validate(e).empty());
    MMNet c = compose(f, e);
    CHECK(validate(c).empty());
    CHECK(c.places.size() == f.places.size() + e.places.size() - 1);
    CHECK(c.transitions.size() == f.transitions.size() + e.transitions.size());
    CHECK(c.find_place("ch_in"));
    CHECK(c.find_place("ch_out"));
    CHECK(c.find_place("filter.ch_out"));
    CHECK(c.find_place("enricher_keyed.p1"));
    CHECK(c.name == "filter_enricher_keyed");

    try {
      compose(f, enricher_net());
      FAIL("expected ChannelTypeMismatch");
    } catch (const ChannelTypeMismatch& err) {
      std::string msg = err.what();
      CHECK(msg.find("str*oid") != std::string::npos);
      CHECK(msg.find("str*str*oid") != std::string::npos);
    }
  }

  TEST_CASE("composition keeps distinct actions apart") {
    MMNet a = detector_net();
    MMNet b = detector_net();
    b.name = "detector2";
    b.actions[0].mm_plus.pop_back();
    MMNet c = compose(a, b);
    CHECK(validate(c).empty());
    CHECK(c.actions.size() == 3);
    CHECK(c.find_action("detector2.addImgCnt"));
  }

  TEST_CASE("demo nets") {
    CHECK(pattern_names().size() == 5);
    for (const auto& name : pattern_names()) CHECK(validate(demo_net(name)).empty());
    CHECK_THROWS_AS(demo_net("nope"), Error);
  }
}
