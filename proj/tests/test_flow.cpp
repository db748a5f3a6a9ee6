#include <doctest.h>

#include "oracle.hpp"
#include "rsm/flow.hpp"

using namespace rsm;

namespace {

DiGraph path_graph() {
  DiGraph g;
  int s = g.ensure_vertex("s");
  int a = g.ensure_vertex("a");
  int t = g.ensure_vertex("t");
  g.add_edge(s, a, Cost(1));
  g.add_edge(a, t, Cost(1));
  return g;
}

}  // namespace

TEST_CASE("max flow on a unit path") {
  DiGraph g = path_graph();
  auto mf = max_flow(g, g.vertex("s"), g.vertex("t"));
  CHECK(mf.value == Cost(1));
}

TEST_CASE("direct infinite edge has no finite cut") {
  DiGraph g;
  int s = g.ensure_vertex("s");
  int t = g.ensure_vertex("t");
  g.add_edge(s, t, Cost::infinity());
  auto mf = max_flow(g, s, t);
  CHECK(!mf.value.is_finite());
  auto cut = min_cut(g, s, t);
  CHECK(!cut.value.is_finite());
}

TEST_CASE("parallel edges add up") {
  // expected flow 2 pinned by enumerating all cuts of the 3-vertex graph:
  // {s}: 1+2=3, {s,a}: 2 -> minimum 2
  DiGraph g;
  int s = g.ensure_vertex("s");
  int a = g.ensure_vertex("a");
  int t = g.ensure_vertex("t");
  g.add_edge(s, a, Cost(1));
  g.add_edge(s, a, Cost(2));
  g.add_edge(a, t, Cost(2));
  auto mf = max_flow(g, s, t);
  CHECK(mf.value == Cost(2));
  CHECK(mf.value == oracle::brute_min_cut_value(g, s, t));
}

TEST_CASE("minimal min cut on the unit path is {s}") {
  DiGraph g = path_graph();
  auto cut = min_cut(g, g.vertex("s"), g.vertex("t"));
  CHECK(cut.value == Cost(1));
  CHECK(cut.members.test(g.vertex("s")));
  CHECK(!cut.members.test(g.vertex("a")));
  CHECK(!cut.members.test(g.vertex("t")));
}

TEST_CASE("disconnected terminals give a zero cut") {
  DiGraph g;
  int s = g.ensure_vertex("s");
  int t = g.ensure_vertex("t");
  int a = g.ensure_vertex("a");
  g.add_edge(s, a, Cost(3));
  auto cut = min_cut(g, s, t);
  CHECK(cut.value == Cost(0));
  CHECK(cut.members.test(s));
  CHECK(cut.members.test(a));
  CHECK(!cut.members.test(t));
}

TEST_CASE("missing terminals are rejected") {
  DiGraph g;
  int s = g.ensure_vertex("s");
  g.ensure_vertex("t");
  CHECK_THROWS_AS(max_flow(g, s, s), InputError);
  CHECK_THROWS_AS(max_flow(g, s, 5), InputError);
}

TEST_CASE("flow equals exhaustive cut minimum on random graphs") {
  for (std::uint64_t seed = 0; seed < 120; ++seed) {
    oracle::Rng rng(seed * 7919 + 11);
    DiGraph g;
    int n = 3 + (int)rng.below(6);  // up to 8 vertices
    int s = g.ensure_vertex("s");
    int t = g.ensure_vertex("t");
    for (int i = 2; i < n; ++i) g.ensure_vertex("v" + std::to_string(i));
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        if (a == b) continue;
        if (!rng.chance(0.45)) continue;
        Cost c = rng.chance(0.1) ? Cost::infinity()
                                 : Cost((long long)rng.below(6));
        g.add_edge(a, b, c);
      }
    Cost expected = oracle::brute_min_cut_value(g, s, t);
    auto mf = max_flow(g, s, t);
    CHECK(mf.value == expected);
    if (expected.is_finite()) {
      auto cut = min_cut(g, s, t);
      CHECK(cut.value == expected);
      CHECK(g.cut_value(cut.members) == expected);
      // the minimal side never has an outgoing residual edge
      for (const auto& e : mf.residual.edges)
        CHECK(!(cut.members.test(e.tail) && !cut.members.test(e.head)));
    }
  }
}

TEST_CASE("rational capacities stay exact") {
  DiGraph g;
  int s = g.ensure_vertex("s");
  int a = g.ensure_vertex("a");
  int t = g.ensure_vertex("t");
  g.add_edge(s, a, Cost(Rat::parse("0.5")));
  g.add_edge(s, a, Cost(Rat::parse("0.25")));
  g.add_edge(a, t, Cost(Rat(3, 4)));
  auto mf = max_flow(g, s, t);
  CHECK(mf.value == Cost(Rat(3, 4)));
}
