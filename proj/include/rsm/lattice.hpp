#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rsm/core.hpp"
#include "rsm/digraph.hpp"
#include "rsm/flow.hpp"

namespace rsm {

// Compact representation of a distributive set lattice: a partition of the
// ground set into U0 (contained in every member), U_inf (disjoint from every
// member) and blocks U1..Ub, plus a DAG over {0..b} with 0 = U0 its unique
// sink. Members are exactly U0 together with a union of blocks whose index
// set has no DAG edge to an unchosen index.
struct CompactLattice {
  Universe universe;
  ElemSet u0;
  ElemSet uinf;
  std::vector<ElemSet> blocks;             // indices 1..b map to blocks[i-1]
  std::vector<std::pair<int, int>> dag;    // edges over {0..b}

  size_t block_count() const { return blocks.size(); }

  void validate() const {
    size_t n = universe.size();
    if (u0.size() != n || uinf.size() != n)
      throw InputError("lattice blocks sized for a different universe");
    ElemSet seen = u0;
    if ((u0 & uinf).any()) throw InputError("U0 and Uinf overlap");
    seen |= uinf;
    for (const auto& b : blocks) {
      if (b.size() != n) throw InputError("lattice block over wrong universe");
      if (b.none()) throw InputError("empty lattice block");
      if ((seen & b).any()) throw InputError("lattice blocks overlap");
      seen |= b;
    }
    if (seen.count() != n)
      throw InputError("lattice blocks do not partition the universe");

    int b = (int)blocks.size();
    std::vector<int> outdeg(b + 1, 0);
    std::vector<std::vector<int>> adj(b + 1);
    for (auto [from, to] : dag) {
      if (from < 0 || to < 0 || from > b || to > b)
        throw InputError("lattice DAG edge index out of range");
      if (from == to) throw InputError("lattice DAG self-loop");
      ++outdeg[from];
      adj[from].push_back(to);
    }
    if (outdeg[0] != 0) throw InputError("U0 must be a sink of the lattice DAG");
    for (int i = 1; i <= b; ++i)
      if (outdeg[i] == 0)
        throw InputError("lattice DAG has a sink other than U0");
    std::vector<int> state(b + 1, 0);
    std::vector<int> stack;
    for (int start = 0; start <= b; ++start) {
      if (state[start] != 0) continue;
      stack.push_back(start);
      while (!stack.empty()) {
        int v = stack.back();
        if (state[v] == 0) {
          state[v] = 1;
          for (int w : adj[v]) {
            if (state[w] == 1) throw InputError("lattice DAG has a cycle");
            if (state[w] == 0) stack.push_back(w);
          }
        } else {
          state[v] = 2;
          stack.pop_back();
        }
      }
    }
  }

  // Sort blocks by their smallest element, remap and dedupe DAG edges.
  // Serialized lattices are byte-stable after this.
  void canonicalize() {
    int b = (int)blocks.size();
    std::vector<int> order(b);
    for (int i = 0; i < b; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int x, int y) {
      return blocks[x].find_first() < blocks[y].find_first();
    });
    std::vector<int> newpos(b + 1, 0);
    for (int i = 0; i < b; ++i) newpos[order[i] + 1] = i + 1;
    std::vector<ElemSet> nb;
    nb.reserve(b);
    for (int i = 0; i < b; ++i) nb.push_back(blocks[order[i]]);
    blocks = std::move(nb);
    for (auto& [from, to] : dag) {
      from = newpos[from];
      to = newpos[to];
    }
    std::sort(dag.begin(), dag.end());
    dag.erase(std::unique(dag.begin(), dag.end()), dag.end());
  }
};

inline bool is_member(const CompactLattice& lat, const ElemSet& y) {
  if ((lat.u0 & ~y).any()) return false;   // must contain U0
  if ((y & lat.uinf).any()) return false;  // must avoid Uinf
  int b = (int)lat.blocks.size();
  std::vector<char> chosen(b + 1, 0);
  chosen[0] = 1;
  for (int i = 1; i <= b; ++i) {
    const ElemSet& blk = lat.blocks[i - 1];
    ElemSet inter = blk & y;
    if (inter.none()) continue;
    if (inter != blk) return false;  // partial block
    chosen[i] = 1;
  }
  for (auto [from, to] : lat.dag)
    if (chosen[from] && !chosen[to]) return false;
  return true;
}

struct EnumMembersResult {
  bool overflow = false;         // more than cap members exist
  std::vector<ElemSet> members;  // canonical order when !overflow
};

namespace detail {

// Visits every DAG-closed block index set exactly once (index 0 always in).
// Blocks are processed after all their DAG-successors, so "include" is legal
// iff all successors are already included. Returns false once the visit
// count would exceed cap.
template <typename Fn>
bool for_each_closed_set(const CompactLattice& lat, size_t cap, Fn&& fn) {
  int b = (int)lat.blocks.size();
  std::vector<std::vector<int>> succ(b + 1);
  for (auto [from, to] : lat.dag) succ[from].push_back(to);

  std::vector<int> topo;  // every vertex after all its successors
  {
    std::vector<std::vector<int>> pred(b + 1);
    std::vector<int> outdeg(b + 1, 0);
    for (auto [from, to] : lat.dag) {
      pred[to].push_back(from);
      ++outdeg[from];
    }
    std::vector<int> ready;
    for (int i = 0; i <= b; ++i)
      if (outdeg[i] == 0) ready.push_back(i);
    while (!ready.empty()) {
      int v = ready.back();
      ready.pop_back();
      topo.push_back(v);
      for (int p : pred[v])
        if (--outdeg[p] == 0) ready.push_back(p);
    }
    if ((int)topo.size() != b + 1)
      throw InputError("lattice DAG has a cycle");
  }

  std::vector<char> in(b + 1, 0);
  in[0] = 1;
  std::vector<int> order;  // topo minus vertex 0
  for (int v : topo)
    if (v != 0) order.push_back(v);

  size_t count = 0;
  std::function<bool(size_t)> rec = [&](size_t pos) -> bool {
    if (pos == order.size()) {
      if (count == cap) return false;
      ++count;
      std::vector<int> chosen;
      for (int i = 1; i <= b; ++i)
        if (in[i]) chosen.push_back(i);
      fn(chosen);
      return true;
    }
    int v = order[pos];
    if (!rec(pos + 1)) return false;  // exclude v
    bool can_include = true;
    for (int w : succ[v])
      if (!in[w]) {
        can_include = false;
        break;
      }
    if (can_include) {
      in[v] = 1;
      bool ok = rec(pos + 1);
      in[v] = 0;
      if (!ok) return false;
    }
    return true;
  };
  return rec(0);
}

}  // namespace detail

inline EnumMembersResult enumerate_members(const CompactLattice& lat,
                                           size_t cap = 1000000) {
  if (cap < 1) throw InputError("enumeration cap must be at least 1");
  EnumMembersResult res;
  bool complete = detail::for_each_closed_set(
      lat, cap, [&](const std::vector<int>& chosen) {
        ElemSet m = lat.u0;
        for (int i : chosen) m |= lat.blocks[i - 1];
        res.members.push_back(std::move(m));
      });
  if (!complete) {
    res.overflow = true;
    res.members.clear();
    return res;
  }
  std::sort(res.members.begin(), res.members.end(), CanonicalLess{});
  return res;
}

inline std::optional<size_t> count_members(const CompactLattice& lat,
                                           size_t cap = 1000000) {
  size_t count = 0;
  bool complete = detail::for_each_closed_set(
      lat, cap, [&](const std::vector<int>&) { ++count; });
  if (!complete) return std::nullopt;
  return count;
}

// ---------------------------------------------------------------------------
// Clique expansion of a compact lattice: one graph vertex per ground element
// plus s and t, with hard (infinite-cost) edges so that a copy set has a
// zero-cost cut exactly when the underlying set is a lattice member.
// ---------------------------------------------------------------------------

struct ExpandedGraph {
  DiGraph g;
  int s = -1;
  int t = -1;
  std::vector<int> elem_of;  // graph vertex -> universe index, -1 for s/t
  std::vector<int> copy_of;  // universe index -> graph vertex
};

inline ExpandedGraph expand_graph(const CompactLattice& lat) {
  const Universe& u = lat.universe;
  if (u.contains("s") || u.contains("t"))
    throw InputError("ground set must not contain the reserved ids s, t");
  ExpandedGraph ex;
  ex.copy_of.resize(u.size());
  for (size_t i = 0; i < u.size(); ++i) {
    int v = ex.g.ensure_vertex(u.ids[i]);
    ex.copy_of[i] = v;
    ex.elem_of.push_back((int)i);
  }
  ex.s = ex.g.ensure_vertex("s");
  ex.t = ex.g.ensure_vertex("t");
  ex.elem_of.push_back(-1);
  ex.elem_of.push_back(-1);

  Cost hard = Cost::infinity();
  auto clique = [&](const ElemSet& blk) {
    auto idx = set_indices(blk);
    for (size_t a = 0; a < idx.size(); ++a)
      for (size_t b = 0; b < idx.size(); ++b)
        if (a != b)
          ex.g.add_edge(ex.copy_of[idx[a]], ex.copy_of[idx[b]], hard);
  };
  clique(lat.u0);
  clique(lat.uinf);
  for (const auto& blk : lat.blocks) clique(blk);

  auto block_of = [&](int dag_index) -> const ElemSet& {
    return dag_index == 0 ? lat.u0 : lat.blocks[dag_index - 1];
  };
  for (auto [from, to] : lat.dag) {
    for (size_t a : set_indices(block_of(from)))
      for (size_t b : set_indices(block_of(to)))
        ex.g.add_edge(ex.copy_of[a], ex.copy_of[b], hard);
  }
  for (size_t a : set_indices(lat.u0)) {
    ex.g.add_edge(ex.copy_of[a], ex.s, hard);
    ex.g.add_edge(ex.s, ex.copy_of[a], hard);
  }
  for (size_t a : set_indices(lat.uinf)) {
    ex.g.add_edge(ex.copy_of[a], ex.t, hard);
    ex.g.add_edge(ex.t, ex.copy_of[a], hard);
  }
  return ex;
}

// ---------------------------------------------------------------------------
// Picard-Queyranne condensation: from a max-flow residual graph, read off
// the compact lattice of all minimum (s,t)-cut sides (as subsets of the
// vertex set minus {s,t}).
// ---------------------------------------------------------------------------

inline CompactLattice residual_condensation(const DiGraph& g,
                                            const DiGraph& residual, int s,
                                            int t) {
  int n = (int)g.vcount();
  if (s < 0 || t < 0 || s >= n || t >= n || s == t)
    throw InputError("condensation requires distinct vertices s and t");

  auto reach_s = detail::reachable(residual, s);
  if (reach_s.test(t))
    throw InputError(
        "residual still connects s to t; min cut is infinite or flow not "
        "maximum");
  DiGraph rev;
  rev.names = residual.names;
  rev.index = residual.index;
  for (const auto& e : residual.edges)
    rev.edges.push_back({e.head, e.tail, e.cost});
  auto reach_t = detail::reachable(rev, t);

  std::vector<std::string> ground;
  for (int v = 0; v < n; ++v)
    if (v != s && v != t) ground.push_back(g.names[v]);
  Universe u{ground};

  CompactLattice lat;
  lat.universe = u;
  lat.u0 = empty_set(u);
  lat.uinf = empty_set(u);
  std::vector<int> vert_elem(n, -1);
  for (int v = 0; v < n; ++v)
    if (v != s && v != t) vert_elem[v] = u.index(g.names[v]);

  std::vector<int> region(n, 0);  // 0 = middle, 1 = forced in, 2 = forced out
  for (int v = 0; v < n; ++v) {
    if (reach_s.test(v)) {
      region[v] = 1;
      if (vert_elem[v] >= 0) lat.u0.set(vert_elem[v]);
    } else if (reach_t.test(v)) {
      region[v] = 2;
      if (vert_elem[v] >= 0) lat.uinf.set(vert_elem[v]);
    }
  }

  // strongly connected components of the middle region (iterative Tarjan)
  std::vector<std::vector<int>> adj(n);
  for (const auto& e : residual.edges) adj[e.tail].push_back(e.head);
  std::vector<int> comp(n, -1), low(n), disc(n, -1), stk;
  std::vector<char> on_stack(n, 0);
  int timer = 0, ncomp = 0;
  struct Frame {
    int v;
    size_t ei;
  };
  for (int start = 0; start < n; ++start) {
    if (region[start] != 0 || disc[start] != -1) continue;
    std::vector<Frame> frames{{start, 0}};
    disc[start] = low[start] = timer++;
    stk.push_back(start);
    on_stack[start] = 1;
    while (!frames.empty()) {
      auto& f = frames.back();
      if (f.ei < adj[f.v].size()) {
        int w = adj[f.v][f.ei++];
        if (region[w] != 0) continue;
        if (disc[w] == -1) {
          disc[w] = low[w] = timer++;
          stk.push_back(w);
          on_stack[w] = 1;
          frames.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], disc[w]);
        }
      } else {
        if (low[f.v] == disc[f.v]) {
          while (true) {
            int w = stk.back();
            stk.pop_back();
            on_stack[w] = 0;
            comp[w] = ncomp;
            if (w == f.v) break;
          }
          ++ncomp;
        }
        int v = f.v;
        frames.pop_back();
        if (!frames.empty())
          low[frames.back().v] = std::min(low[frames.back().v], low[v]);
      }
    }
  }

  lat.blocks.assign(ncomp, empty_set(u));
  for (int v = 0; v < n; ++v)
    if (region[v] == 0) lat.blocks[comp[v]].set(vert_elem[v]);

  std::vector<std::pair<int, int>> edges;
  std::vector<char> has_out(ncomp, 0);
  for (const auto& e : residual.edges) {
    if (region[e.tail] != 0) continue;
    int from = comp[e.tail] + 1;
    if (region[e.head] == 1) {
      edges.emplace_back(from, 0);
      has_out[from - 1] = 1;
    } else if (region[e.head] == 0) {
      int to = comp[e.head] + 1;
      if (from != to) {
        edges.emplace_back(from, to);
        has_out[from - 1] = 1;
      }
    } else {
      throw InputError("residual edge from a middle block into the t side");
    }
  }
  for (int c = 0; c < ncomp; ++c)
    if (!has_out[c]) edges.emplace_back(c + 1, 0);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  lat.dag = std::move(edges);
  lat.canonicalize();
  lat.validate();
  return lat;
}

// ---------------------------------------------------------------------------
// Hamming distance from a set to the nearest lattice member, by one max-flow
// on the expansion graph with unit penalty edges: s->v for v in Z (pay 1 to
// leave v out) and v->t for v outside Z (pay 1 to take v in).
// ---------------------------------------------------------------------------

struct GammaResult {
  size_t distance = 0;
  ElemSet nearest;
};

inline GammaResult gamma(const CompactLattice& lat, const ElemSet& z) {
  if (z.size() != lat.universe.size())
    throw InputError("gamma: set over wrong universe");
  ExpandedGraph ex = expand_graph(lat);
  for (size_t i = 0; i < lat.universe.size(); ++i) {
    if (z.test(i))
      ex.g.add_edge(ex.s, ex.copy_of[i], Cost(1));
    else
      ex.g.add_edge(ex.copy_of[i], ex.t, Cost(1));
  }
  CutSide cut = min_cut(ex.g, ex.s, ex.t);
  if (!cut.value.is_finite() || !cut.value.value.is_integer())
    throw InputError("gamma cut value not a finite integer");
  GammaResult res;
  res.distance = (size_t)cut.value.value.num();
  res.nearest = empty_set(lat.universe);
  for (size_t i = 0; i < lat.universe.size(); ++i)
    if (cut.members.test(ex.copy_of[i])) res.nearest.set(i);
  return res;
}

}  // namespace rsm
