#include <doctest.h>

#include <cstdint>

#include "oracle.hpp"
#include "rsm/lattice.hpp"

using namespace rsm;

namespace {

CompactLattice condense(DiGraph g) {
  int s = g.vertex("s"), t = g.vertex("t");
  auto mf = max_flow(g, s, t);
  return residual_condensation(g, mf.residual, s, t);
}

DiGraph two_edge_graph(Cost first, Cost second) {
  DiGraph g;
  int s = g.ensure_vertex("s");
  int a = g.ensure_vertex("a");
  int t = g.ensure_vertex("t");
  g.add_edge(s, a, first);
  g.add_edge(a, t, second);
  return g;
}

std::vector<ElemSet> members_of(const CompactLattice& lat) {
  auto res = enumerate_members(lat);
  REQUIRE(!res.overflow);
  return res.members;
}

}  // namespace

TEST_CASE("condensation of the unit path: both cuts are minimum") {
  CompactLattice lat = condense(two_edge_graph(Cost(1), Cost(1)));
  CHECK(lat.u0.none());
  CHECK(lat.uinf.none());
  REQUIRE(lat.blocks.size() == 1);
  CHECK(lat.blocks[0].test(lat.universe.index("a")));
  REQUIRE(lat.dag.size() == 1);
  CHECK(lat.dag[0] == std::make_pair(1, 0));
  auto mem = members_of(lat);
  REQUIRE(mem.size() == 2);  // {} and {a}
}

TEST_CASE("condensation pins the unique minimizer on one side") {
  CompactLattice empty_only = condense(two_edge_graph(Cost(1), Cost::infinity()));
  CHECK(empty_only.u0.none());
  CHECK(empty_only.uinf.count() == 1);
  CHECK(empty_only.blocks.empty());
  auto mem1 = members_of(empty_only);
  REQUIRE(mem1.size() == 1);
  CHECK(mem1[0].none());

  CompactLattice full_only = condense(two_edge_graph(Cost::infinity(), Cost(1)));
  CHECK(full_only.u0.count() == 1);
  CHECK(full_only.uinf.none());
  CHECK(full_only.blocks.empty());
  auto mem2 = members_of(full_only);
  REQUIRE(mem2.size() == 1);
  CHECK(mem2[0].count() == 1);
}

TEST_CASE("condensation rejects an infinite min cut") {
  DiGraph g;
  int s = g.ensure_vertex("s");
  int t = g.ensure_vertex("t");
  g.add_edge(s, t, Cost::infinity());
  auto mf = max_flow(g, s, t);
  CHECK_THROWS_AS(residual_condensation(g, mf.residual, s, t), InputError);
}

TEST_CASE("condensed members equal brute-force minimum cuts") {
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    oracle::Rng rng(seed * 104729 + 3);
    size_t n = 1 + rng.below(6);
    Universe u = oracle::small_universe(n);
    auto f = oracle::random_cut_fn(u, rng);
    CompactLattice lat = condense(f.cut_graph);
    auto expect = oracle::brute_min_cut_sides(f.cut_graph, f.s, f.t, u);
    auto got = members_of(lat);
    CHECK(got == expect);
    for (const auto& m : got) CHECK(is_member(lat, m));
  }
}

TEST_CASE("membership rules on hand-built lattices") {
  Universe u = oracle::small_universe(3);  // a b c
  CompactLattice lat;
  lat.universe = u;
  lat.u0 = make_set(u, {"a"});
  lat.uinf = empty_set(u);
  lat.blocks = {make_set(u, {"b"}), make_set(u, {"c"})};
  // chain: block c -> block b -> U0, so members are {a}, {a,b}, {a,b,c}
  lat.dag = {{1, 0}, {2, 1}};
  lat.validate();

  CHECK(is_member(lat, make_set(u, {"a"})));
  CHECK(is_member(lat, make_set(u, {"a", "b"})));
  CHECK(is_member(lat, make_set(u, {"a", "b", "c"})));
  CHECK(!is_member(lat, empty_set(u)));             // misses U0
  CHECK(!is_member(lat, make_set(u, {"a", "c"})));  // c needs b first
  auto mem = members_of(lat);
  CHECK(mem.size() == 3);
}

TEST_CASE("path DAG of b blocks has b+1 members") {
  for (int b : {1, 2, 5, 9}) {
    std::vector<std::string> ids;
    for (int i = 0; i < b; ++i) ids.push_back("e" + std::to_string(i));
    Universe u{ids};
    CompactLattice lat;
    lat.universe = u;
    lat.u0 = empty_set(u);
    lat.uinf = empty_set(u);
    for (int i = 0; i < b; ++i) {
      ElemSet blk = empty_set(u);
      blk.set(u.index("e" + std::to_string(i)));
      lat.blocks.push_back(blk);
    }
    for (int i = 1; i <= b; ++i) lat.dag.emplace_back(i, i - 1);
    lat.validate();
    auto res = enumerate_members(lat);
    REQUIRE(!res.overflow);
    CHECK((int)res.members.size() == b + 1);
  }
}

TEST_CASE("antichain of b blocks has 2^b members") {
  for (int b = 1; b <= 4; ++b) {
    std::vector<std::string> ids;
    for (int i = 0; i < b; ++i) ids.push_back("e" + std::to_string(i));
    Universe u{ids};
    CompactLattice lat;
    lat.universe = u;
    lat.u0 = empty_set(u);
    lat.uinf = empty_set(u);
    for (int i = 0; i < b; ++i) {
      ElemSet blk = empty_set(u);
      blk.set(i);
      lat.blocks.push_back(blk);
    }
    for (int i = 1; i <= b; ++i) lat.dag.emplace_back(i, 0);
    lat.validate();
    auto res = enumerate_members(lat);
    REQUIRE(!res.overflow);
    CHECK(res.members.size() == (size_t)1 << b);
  }
}

TEST_CASE("enumeration overflow is reported, not truncated silently") {
  int b = 24;
  std::vector<std::string> ids;
  for (int i = 0; i < b; ++i) ids.push_back("x" + std::to_string(100 + i));
  Universe u{ids};
  CompactLattice lat;
  lat.universe = u;
  lat.u0 = empty_set(u);
  lat.uinf = empty_set(u);
  for (int i = 0; i < b; ++i) {
    ElemSet blk = empty_set(u);
    blk.set(i);
    lat.blocks.push_back(blk);
  }
  for (int i = 1; i <= b; ++i) lat.dag.emplace_back(i, 0);
  auto res = enumerate_members(lat, 1000);
  CHECK(res.overflow);
  CHECK(res.members.empty());
  CHECK(!count_members(lat, 1000).has_value());
  CHECK(count_members(lat, 1 << 25).value() == (size_t)1 << 24);
}

TEST_CASE("expansion graph edges for forced-in and forced-out blocks") {
  Universe u = oracle::small_universe(3);  // a b c
  CompactLattice lat;
  lat.universe = u;
  lat.u0 = make_set(u, {"a"});
  lat.uinf = make_set(u, {"c"});
  lat.blocks = {make_set(u, {"b"})};
  lat.dag = {{1, 0}};
  lat.validate();
  ExpandedGraph ex = expand_graph(lat);
  int a = ex.copy_of[u.index("a")];
  int b = ex.copy_of[u.index("b")];
  int c = ex.copy_of[u.index("c")];
  auto has_edge = [&](int x, int y) {
    for (const auto& e : ex.g.edges)
      if (e.tail == x && e.head == y) return true;
    return false;
  };
  CHECK(has_edge(a, ex.s));
  CHECK(has_edge(ex.s, a));
  CHECK(has_edge(c, ex.t));
  CHECK(has_edge(ex.t, c));
  CHECK(has_edge(b, a));   // DAG edge block -> U0
  CHECK(!has_edge(a, b));
}

TEST_CASE("within-block cliques are bidirected") {
  Universe u = oracle::small_universe(2);  // x y as a, b
  CompactLattice lat;
  lat.universe = u;
  lat.u0 = empty_set(u);
  lat.uinf = empty_set(u);
  lat.blocks = {full_set(u)};
  lat.dag = {{1, 0}};
  ExpandedGraph ex = expand_graph(lat);
  int x = ex.copy_of[0], y = ex.copy_of[1];
  int fwd = 0, bwd = 0;
  for (const auto& e : ex.g.edges) {
    if (e.tail == x && e.head == y) ++fwd;
    if (e.tail == y && e.head == x) ++bwd;
  }
  CHECK(fwd == 1);
  CHECK(bwd == 1);
}

TEST_CASE("zero cut in the expansion graph is exactly membership") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    oracle::Rng rng(seed * 31337 + 5);
    size_t n = 1 + rng.below(6);
    Universe u = oracle::small_universe(n);
    auto f = oracle::random_fn(u, rng);
    CompactLattice lat = to_lattice(f);
    ExpandedGraph ex = expand_graph(lat);
    for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
      ElemSet x(n, mask);
      boost::dynamic_bitset<> side(ex.g.vcount());
      side.set(ex.s);
      for (size_t i = 0; i < n; ++i)
        if (x.test(i)) side.set(ex.copy_of[i]);
      bool zero_cut = ex.g.cut_value(side) == Cost(0);
      CHECK(zero_cut == is_member(lat, x));
    }
  }
}

TEST_CASE("gamma distance basics") {
  Universe u = oracle::small_universe(2);  // a b
  // lattice {{}, {a}}
  CompactLattice lat;
  lat.universe = u;
  lat.u0 = empty_set(u);
  lat.uinf = make_set(u, {"b"});
  lat.blocks = {make_set(u, {"a"})};
  lat.dag = {{1, 0}};
  auto r = gamma(lat, make_set(u, {"a"}));
  CHECK(r.distance == 0);
  CHECK(r.nearest == make_set(u, {"a"}));

  // forced member {a,b}
  CompactLattice forced;
  forced.universe = u;
  forced.u0 = full_set(u);
  forced.uinf = empty_set(u);
  auto r2 = gamma(forced, empty_set(u));
  CHECK(r2.distance == 2);
  CHECK(r2.nearest == full_set(u));
}

TEST_CASE("gamma equals the exhaustive member-distance minimum") {
  for (std::uint64_t seed = 0; seed < 80; ++seed) {
    oracle::Rng rng(seed * 65537 + 9);
    size_t n = 1 + rng.below(6);
    Universe u = oracle::small_universe(n);
    auto f = oracle::random_fn(u, rng);
    CompactLattice lat = to_lattice(f);
    auto family = oracle::brute_argmin(
        rsm::FunctionSpec::make_lattice(u, lat));
    for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
      ElemSet z(n, mask);
      auto got = gamma(lat, z);
      CHECK(got.distance == oracle::brute_gamma(family, z));
      CHECK(is_member(lat, got.nearest));
      CHECK(symdiff(z, got.nearest) == got.distance);
    }
  }
}
