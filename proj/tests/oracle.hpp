#pragma once

// Independent brute-force oracles used to pin expected values. Everything
// here works from first principles (exhaustive enumeration, direct
// definitions) and shares no flow or lattice traversal code with the
// library paths it checks.

#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <vector>

#include "rsm/core.hpp"
#include "rsm/digraph.hpp"
#include "rsm/lattice.hpp"
#include "rsm/submod.hpp"

namespace oracle {

using rsm::Cost;
using rsm::DiGraph;
using rsm::ElemSet;
using rsm::Universe;

// All (s,t)-cut values by scanning every vertex subset with s inside and t
// outside. Returns the minimum value.
inline Cost brute_min_cut_value(const DiGraph& g, int s, int t) {
  int n = (int)g.vcount();
  Cost best = Cost::infinity();
  for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
    if (!(mask & (1ull << s)) || (mask & (1ull << t))) continue;
    boost::dynamic_bitset<> side(n);
    for (int v = 0; v < n; ++v)
      if (mask & (1ull << v)) side.set(v);
    Cost val = g.cut_value(side);
    if (val < best) best = val;
  }
  return best;
}

// All minimum-cut sides, as subsets of the ground elements (graph vertices
// minus s,t), keyed by element name through the given universe.
inline std::vector<ElemSet> brute_min_cut_sides(const DiGraph& g, int s, int t,
                                                const Universe& u) {
  int n = (int)g.vcount();
  Cost best = brute_min_cut_value(g, s, t);
  std::vector<ElemSet> out;
  if (!best.is_finite()) return out;
  for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
    if (!(mask & (1ull << s)) || (mask & (1ull << t))) continue;
    boost::dynamic_bitset<> side(n);
    for (int v = 0; v < n; ++v)
      if (mask & (1ull << v)) side.set(v);
    if (g.cut_value(side) == best) {
      ElemSet members = rsm::empty_set(u);
      for (int v = 0; v < n; ++v)
        if (v != s && v != t && side.test(v)) members.set(u.index(g.names[v]));
      out.push_back(members);
    }
  }
  std::sort(out.begin(), out.end(), rsm::CanonicalLess{});
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Independent lattice membership: re-derives the rule from the block
// structure without calling rsm::is_member.
inline bool member_by_definition(const rsm::CompactLattice& lat,
                                 const ElemSet& y) {
  if ((lat.u0 & ~y).any()) return false;
  if ((y & lat.uinf).any()) return false;
  std::vector<char> in(lat.blocks.size() + 1, 0);
  in[0] = 1;
  ElemSet rest = y & ~lat.u0;
  for (size_t i = 0; i < lat.blocks.size(); ++i) {
    ElemSet overlap = lat.blocks[i] & y;
    if (overlap.none()) continue;
    if (overlap != lat.blocks[i]) return false;
    in[i + 1] = 1;
    rest &= ~lat.blocks[i];
  }
  if (rest.any()) return false;
  for (auto [from, to] : lat.dag)
    if (in[from] && !in[to]) return false;
  return true;
}

// Minimizer family of a function spec by exhaustive subset scan; for cut
// functions values come from direct crossing-edge sums.
inline std::vector<ElemSet> brute_argmin(const rsm::FunctionSpec& f) {
  const Universe& u = f.universe;
  size_t n = u.size();
  if (f.kind == rsm::FnKind::Explicit) return f.minimizers;
  std::vector<ElemSet> out;
  if (f.kind == rsm::FnKind::Lattice) {
    for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
      ElemSet x(n, mask);
      if (member_by_definition(f.lattice, x)) out.push_back(x);
    }
  } else {
    Cost best = Cost::infinity();
    std::vector<Cost> vals(1ull << n, Cost(0));
    for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
      ElemSet x(n, mask);
      vals[mask] = rsm::evaluate(f, x);
      if (vals[mask] < best) best = vals[mask];
    }
    for (std::uint64_t mask = 0; mask < (1ull << n); ++mask)
      if (vals[mask] == best) out.push_back(ElemSet(n, mask));
  }
  std::sort(out.begin(), out.end(), rsm::CanonicalLess{});
  return out;
}

inline size_t brute_gamma(const std::vector<ElemSet>& family,
                          const ElemSet& z) {
  size_t best = SIZE_MAX;
  for (const auto& y : family) best = std::min(best, rsm::symdiff(z, y));
  return best;
}

// ---------------------------------------------------------------------------
// Deterministic random generators for test corpora.
// ---------------------------------------------------------------------------

struct Rng {
  std::mt19937_64 eng;
  explicit Rng(std::uint64_t seed) : eng(seed) {}
  std::uint64_t next() { return eng(); }
  // uniform in [0, n)
  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : eng() % n; }
  bool chance(double p) {
    return (double)(eng() % 1000000) < p * 1000000.0;
  }
};

inline Universe small_universe(size_t n) {
  std::vector<std::string> ids;
  for (size_t i = 0; i < n; ++i) ids.push_back(std::string(1, char('a' + i)));
  return Universe{ids};
}

// Random cut-function graph over V + {s,t}: integer costs 0..5, a slice of
// edges infinite. Rejects graphs whose minimum cut is infinite.
inline rsm::FunctionSpec random_cut_fn(const Universe& u, Rng& rng,
                                       double inf_frac = 0.10,
                                       double density = 0.5) {
  while (true) {
    DiGraph g;
    int s = g.ensure_vertex("s");
    int t = g.ensure_vertex("t");
    for (const auto& id : u.ids) g.ensure_vertex(id);
    int n = (int)g.vcount();
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        if (a == b) continue;
        if (a == s && b == t) continue;  // keep a finite cut likely
        if (!rng.chance(density)) continue;
        Cost c = rng.chance(inf_frac) ? Cost::infinity()
                                      : Cost((long long)rng.below(6));
        g.add_edge(a, b, c);
      }
    if (!brute_min_cut_value(g, s, t).is_finite()) continue;
    return rsm::FunctionSpec::make_cut(u, std::move(g));
  }
}

// Random union/intersection-closed family: seed sets closed to a fixpoint.
inline rsm::FunctionSpec random_explicit_fn(const Universe& u, Rng& rng) {
  size_t n = u.size();
  std::set<ElemSet, rsm::CanonicalLess> fam;
  size_t seeds = 1 + rng.below(3);
  for (size_t i = 0; i < seeds; ++i)
    fam.insert(ElemSet(n, rng.below(1ull << n)));
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<ElemSet> cur(fam.begin(), fam.end());
    for (const auto& a : cur)
      for (const auto& b : cur) {
        if (fam.insert(a | b).second) grew = true;
        if (fam.insert(a & b).second) grew = true;
      }
  }
  return rsm::FunctionSpec::make_explicit(
      u, std::vector<ElemSet>(fam.begin(), fam.end()));
}

// Random valid compact lattice: random partition, DAG edges only from
// higher to lower block index (plus mandatory sinks into U0).
inline rsm::FunctionSpec random_lattice_fn(const Universe& u, Rng& rng) {
  size_t n = u.size();
  rsm::CompactLattice lat;
  lat.universe = u;
  lat.u0 = rsm::empty_set(u);
  lat.uinf = rsm::empty_set(u);
  size_t nblocks = n == 0 ? 0 : 1 + rng.below(std::min<size_t>(n, 4));
  std::vector<ElemSet> blocks(nblocks, rsm::empty_set(u));
  for (size_t i = 0; i < n; ++i) {
    std::uint64_t where = rng.below(nblocks + 2);
    if (where == 0)
      lat.u0.set(i);
    else if (where == 1)
      lat.uinf.set(i);
    else
      blocks[where - 2].set(i);
  }
  for (auto& b : blocks)
    if (b.any()) lat.blocks.push_back(b);
  int bcount = (int)lat.blocks.size();
  std::vector<char> has_out(bcount + 1, 1);
  for (int i = 1; i <= bcount; ++i) has_out[i] = 0;
  for (int from = 2; from <= bcount; ++from)
    for (int to = 1; to < from; ++to)
      if (rng.chance(0.4)) {
        lat.dag.emplace_back(from, to);
        has_out[from] = 1;
      }
  for (int i = 1; i <= bcount; ++i)
    if (!has_out[i]) lat.dag.emplace_back(i, 0);
  lat.canonicalize();
  return rsm::FunctionSpec::make_lattice(u, std::move(lat));
}

inline rsm::FunctionSpec random_fn(const Universe& u, Rng& rng) {
  switch (rng.below(3)) {
    case 0: return random_cut_fn(u, rng);
    case 1: return random_explicit_fn(u, rng);
    default: return random_lattice_fn(u, rng);
  }
}

}  // namespace oracle
