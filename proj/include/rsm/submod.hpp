#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rsm/core.hpp"
#include "rsm/digraph.hpp"
#include "rsm/flow.hpp"
#include "rsm/lattice.hpp"

namespace rsm {

enum class FnKind { Cut, Explicit, Lattice };

inline const char* kind_name(FnKind k) {
  switch (k) {
    case FnKind::Cut: return "cut";
    case FnKind::Explicit: return "explicit";
    case FnKind::Lattice: return "lattice";
  }
  return "?";
}

// One submodular function, in one of three concrete forms:
//  - Cut: the (s,t)-restricted cut function of a weighted digraph over
//    the ground set plus {s,t};
//  - Explicit: the minimizer family listed outright (must be closed under
//    union and intersection);
//  - Lattice: the minimizer family in compact form.
struct FunctionSpec {
  FnKind kind = FnKind::Explicit;
  Universe universe;

  // Cut
  DiGraph cut_graph;
  int s = -1, t = -1;

  // Explicit (kept sorted canonically, deduplicated)
  std::vector<ElemSet> minimizers;

  // Lattice
  CompactLattice lattice;

  static FunctionSpec make_cut(const Universe& u, DiGraph g) {
    FunctionSpec f;
    f.kind = FnKind::Cut;
    f.universe = u;
    f.s = g.vertex("s");
    f.t = g.vertex("t");
    f.cut_graph = std::move(g);
    f.validate();
    return f;
  }

  static FunctionSpec make_explicit(const Universe& u,
                                    std::vector<ElemSet> family) {
    FunctionSpec f;
    f.kind = FnKind::Explicit;
    f.universe = u;
    std::sort(family.begin(), family.end(), CanonicalLess{});
    family.erase(std::unique(family.begin(), family.end()), family.end());
    f.minimizers = std::move(family);
    f.validate();
    return f;
  }

  static FunctionSpec make_lattice(const Universe& u, CompactLattice lat) {
    FunctionSpec f;
    f.kind = FnKind::Lattice;
    f.universe = u;
    f.lattice = std::move(lat);
    f.validate();
    return f;
  }

  void validate() const {
    if (universe.contains("s") || universe.contains("t"))
      throw InputError("ground set must not contain the reserved ids s, t");
    switch (kind) {
      case FnKind::Cut: {
        if (s < 0 || t < 0 || s == t)
          throw InputError("cut function graph must contain s and t");
        if (cut_graph.vcount() != universe.size() + 2)
          throw InputError("cut function graph must span exactly V plus s,t");
        for (const auto& name : cut_graph.names)
          if (name != "s" && name != "t" && !universe.contains(name))
            throw InputError("cut graph vertex outside the ground set: " +
                             name);
        break;
      }
      case FnKind::Explicit: {
        if (minimizers.empty())
          throw InputError("explicit minimizer family must be non-empty");
        for (const auto& m : minimizers)
          if (m.size() != universe.size())
            throw InputError("explicit minimizer over wrong universe");
        // Lemma guarantee for genuine argmin families; reject violations
        // rather than silently closing the family.
        std::set<ElemSet, CanonicalLess> fam(minimizers.begin(),
                                             minimizers.end());
        for (const auto& a : minimizers)
          for (const auto& b : minimizers) {
            if (!fam.count(a | b) || !fam.count(a & b))
              throw InputError("lattice closure violated");
          }
        break;
      }
      case FnKind::Lattice: {
        if (!(lattice.universe == universe))
          throw InputError("lattice over wrong universe");
        lattice.validate();
        break;
      }
    }
  }
};

// Cut-function evaluation: total cost leaving X together with s.
inline Cost evaluate(const FunctionSpec& f, const ElemSet& x) {
  if (f.kind != FnKind::Cut)
    throw InputError("evaluate is defined for cut functions");
  if (x.size() != f.universe.size())
    throw InputError("evaluate: set over wrong universe");
  boost::dynamic_bitset<> side(f.cut_graph.vcount());
  side.set(f.s);
  for (size_t i = 0; i < f.universe.size(); ++i)
    if (x.test(i)) side.set(f.cut_graph.vertex(f.universe.ids[i]));
  return f.cut_graph.cut_value(side);
}

struct MinimizeResult {
  std::optional<Cost> value;  // set for cut functions
  ElemSet minimizer;
};

inline MinimizeResult minimize(const FunctionSpec& f) {
  MinimizeResult res;
  switch (f.kind) {
    case FnKind::Cut: {
      CutSide cut = min_cut(f.cut_graph, f.s, f.t);
      if (!cut.value.is_finite()) throw InputError("no finite minimizer");
      res.value = cut.value;
      res.minimizer = empty_set(f.universe);
      for (size_t i = 0; i < f.universe.size(); ++i)
        if (cut.members.test(f.cut_graph.vertex(f.universe.ids[i])))
          res.minimizer.set(i);
      return res;
    }
    case FnKind::Explicit: {
      // the family is union/intersection closed, so the intersection of all
      // members is itself the unique minimal member
      ElemSet m = f.minimizers.front();
      for (const auto& other : f.minimizers) m &= other;
      res.minimizer = m;
      return res;
    }
    case FnKind::Lattice: {
      res.minimizer = f.lattice.u0;
      return res;
    }
  }
  throw InputError("unreachable");
}

// Normalizes any function kind to the compact lattice of its minimizers.
inline CompactLattice to_lattice(const FunctionSpec& f) {
  switch (f.kind) {
    case FnKind::Cut: {
      MaxFlowResult mf = max_flow(f.cut_graph, f.s, f.t);
      if (!mf.value.is_finite()) throw InputError("no finite minimizer");
      return residual_condensation(f.cut_graph, mf.residual, f.s, f.t);
    }
    case FnKind::Explicit: {
      const size_t n = f.universe.size();
      const size_t m = f.minimizers.size();
      // membership pattern of each element across the family
      std::vector<boost::dynamic_bitset<>> pattern(
          n, boost::dynamic_bitset<>(m));
      for (size_t j = 0; j < m; ++j)
        for (size_t i = 0; i < n; ++i)
          if (f.minimizers[j].test(i)) pattern[i].set(j);

      CompactLattice lat;
      lat.universe = f.universe;
      lat.u0 = empty_set(f.universe);
      lat.uinf = empty_set(f.universe);
      std::vector<boost::dynamic_bitset<>> block_pat;
      boost::dynamic_bitset<> all(m);
      all.set();
      for (size_t i = 0; i < n; ++i) {
        if (pattern[i] == all) {
          lat.u0.set(i);
        } else if (pattern[i].none()) {
          lat.uinf.set(i);
        } else {
          size_t at = block_pat.size();
          for (size_t bidx = 0; bidx < block_pat.size(); ++bidx)
            if (block_pat[bidx] == pattern[i]) {
              at = bidx;
              break;
            }
          if (at == block_pat.size()) {
            block_pat.push_back(pattern[i]);
            lat.blocks.emplace_back(empty_set(f.universe));
          }
          lat.blocks[at].set(i);
        }
      }
      // edge B -> B' iff every member containing B contains B'
      int b = (int)lat.blocks.size();
      for (int from = 1; from <= b; ++from) {
        lat.dag.emplace_back(from, 0);
        for (int to = 1; to <= b; ++to)
          if (from != to &&
              (block_pat[from - 1] & ~block_pat[to - 1]).none())
            lat.dag.emplace_back(from, to);
      }
      lat.canonicalize();
      lat.validate();
      return lat;
    }
    case FnKind::Lattice: {
      CompactLattice lat = f.lattice;
      lat.validate();
      lat.canonicalize();
      return lat;
    }
  }
  throw InputError("unreachable");
}

}  // namespace rsm
