#pragma once

#include <functional>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "rsm/core.hpp"
#include "rsm/flow.hpp"
#include "rsm/instance.hpp"
#include "rsm/lattice.hpp"
#include "rsm/submod.hpp"

namespace rsm {

// ---------------------------------------------------------------------------
// Exhaustive ground-truth solver. Minimizer families come from first
// principles (direct evaluation / membership scans); no flow computation
// anywhere on this path.
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<ElemSet> brute_family(const FunctionSpec& f) {
  const size_t n = f.universe.size();
  if (f.kind == FnKind::Explicit) return f.minimizers;
  std::vector<ElemSet> out;
  if (f.kind == FnKind::Lattice) {
    for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
      ElemSet x(n, mask);
      if (is_member(f.lattice, x)) out.push_back(x);
    }
    return out;
  }
  Cost best = Cost::infinity();
  std::vector<Cost> vals;
  vals.reserve(1ull << n);
  for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
    ElemSet x(n, mask);
    vals.push_back(evaluate(f, x));
    if (vals.back() < best) best = vals.back();
  }
  if (!best.is_finite()) throw InputError("no finite minimizer");
  for (std::uint64_t mask = 0; mask < (1ull << n); ++mask)
    if (vals[mask] == best) out.push_back(ElemSet(n, mask));
  return out;
}

}  // namespace detail

inline SolveOutcome solve_brute(const Instance& inst, const Caps& caps = {}) {
  inst.validate();
  const size_t n = inst.universe.size();
  if ((int)n > caps.brute_limit)
    return SolveOutcome::refused("ground set of size " + std::to_string(n) +
                                 " exceeds brute-force limit " +
                                 std::to_string(caps.brute_limit));
  if (inst.k() == 0)
    return SolveOutcome::feasible({empty_set(inst.universe), {}});

  std::vector<std::vector<ElemSet>> families;
  for (const auto& f : inst.functions)
    families.push_back(detail::brute_family(f));

  for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
    ElemSet x(n, mask);
    Solution sol;
    sol.x = x;
    bool ok = true;
    for (size_t i = 0; i < inst.k() && ok; ++i) {
      size_t best = SIZE_MAX;
      const ElemSet* best_y = nullptr;
      for (const auto& y : families[i]) {
        size_t dist = symdiff(x, y);
        if (dist < best) {
          best = dist;
          best_y = &y;
        }
      }
      if (best_y == nullptr || (long long)best > inst.threshold(i))
        ok = false;
      else
        sol.witnesses.push_back({*best_y, best});
    }
    if (ok) return SolveOutcome::feasible(std::move(sol));
  }
  return SolveOutcome::infeasible();
}

// ---------------------------------------------------------------------------
// Multi-budgeted directed cut with forbidden edges.
// ---------------------------------------------------------------------------

// Every edge is either in a budget class (at most d_i of class i may cross
// the cut), or forbidden (may not cross at all). Classes are disjoint by
// construction. An eliminated instance has no forbidden flags left.
struct MbdcInstance {
  std::vector<std::string> vertex_names;
  int s = -1, t = -1;
  struct Edge {
    int tail, head;
    int cls;         // budget class index, or -1 for none
    bool forbidden;
  };
  std::vector<Edge> edges;
  std::vector<long long> budgets;

  size_t vcount() const { return vertex_names.size(); }

  void validate() const {
    if (s < 0 || t < 0 || s == t || s >= (int)vcount() || t >= (int)vcount())
      throw InputError("budgeted-cut instance needs distinct s and t");
    for (long long b : budgets)
      if (b < 0) throw InputError("negative budget");
    for (const auto& e : edges) {
      if (e.tail == e.head) throw InputError("self-loop");
      if (e.tail < 0 || e.head < 0 || e.tail >= (int)vcount() ||
          e.head >= (int)vcount())
        throw InputError("edge endpoint out of range");
      if (e.cls < -1 || e.cls >= (int)budgets.size())
        throw InputError("edge class out of range");
    }
  }
};

// The combined graph: per-function copies of the ground set glued to a
// shared star copy through unit budget classes, with all structural edges
// forbidden. Carries the vertex maps needed to read solutions back.
struct MbdcBuild {
  MbdcInstance instance;
  std::vector<int> star;               // element -> star vertex
  std::vector<std::vector<int>> copy;  // function -> element -> copy vertex
};

inline MbdcBuild build_mbdc(const Instance& inst,
                            const std::vector<CompactLattice>* lats = nullptr) {
  inst.validate();
  std::vector<CompactLattice> local;
  if (!lats) {
    local = lattices_of(inst);
    lats = &local;
  }
  const size_t n = inst.universe.size();
  const size_t k = inst.k();

  MbdcBuild out;
  MbdcInstance& m = out.instance;
  auto add_vertex = [&](const std::string& name) {
    m.vertex_names.push_back(name);
    return (int)m.vertex_names.size() - 1;
  };
  m.s = add_vertex("s");
  m.t = add_vertex("t");
  out.star.resize(n);
  for (size_t i = 0; i < n; ++i)
    out.star[i] = add_vertex(inst.universe.ids[i] + "*");
  out.copy.assign(k, std::vector<int>(n));
  for (size_t j = 0; j < k; ++j)
    for (size_t i = 0; i < n; ++i)
      out.copy[j][i] =
          add_vertex(inst.universe.ids[i] + "@" + std::to_string(j + 1));

  m.budgets.assign(k, 0);
  for (size_t j = 0; j < k; ++j) {
    m.budgets[j] = inst.threshold(j);
    ExpandedGraph ex = expand_graph((*lats)[j]);
    auto remap = [&](int v) {
      if (v == ex.s) return m.s;
      if (v == ex.t) return m.t;
      return out.copy[j][ex.elem_of[v]];
    };
    for (const auto& e : ex.g.edges)
      m.edges.push_back({remap(e.tail), remap(e.head), -1, true});
    for (size_t i = 0; i < n; ++i) {
      m.edges.push_back({out.star[i], out.copy[j][i], (int)j, false});
      m.edges.push_back({out.copy[j][i], out.star[i], (int)j, false});
    }
  }
  m.validate();
  return out;
}

// Forbidden-edge elimination: a forbidden edge in class i becomes d_i+1
// parallel class-i copies; forbidden edges without a class move to a fresh
// class of budget 1, duplicated once. Solution sets are unchanged.
inline MbdcInstance eliminate_forbidden(const MbdcInstance& m) {
  m.validate();
  bool any = false;
  bool classless = false;
  for (const auto& e : m.edges)
    if (e.forbidden) {
      any = true;
      if (e.cls < 0) classless = true;
    }
  if (!any) return m;

  MbdcInstance out;
  out.vertex_names = m.vertex_names;
  out.s = m.s;
  out.t = m.t;
  out.budgets = m.budgets;
  int extra = -1;
  if (classless) {
    extra = (int)out.budgets.size();
    out.budgets.push_back(1);
  }
  for (const auto& e : m.edges) {
    if (!e.forbidden) {
      out.edges.push_back(e);
      continue;
    }
    int cls = e.cls >= 0 ? e.cls : extra;
    long long copies = out.budgets[cls] + 1;
    for (long long c = 0; c < copies; ++c)
      out.edges.push_back({e.tail, e.head, cls, false});
  }
  out.validate();
  return out;
}

namespace detail {

struct MbdcSearch {
  const MbdcInstance& m;
  std::vector<std::vector<int>> adj;  // vertex -> edge ids
  std::vector<char> removed;
  std::vector<long long> remaining;

  explicit MbdcSearch(const MbdcInstance& inst)
      : m(inst),
        adj(inst.vcount()),
        removed(inst.edges.size(), 0),
        remaining(inst.budgets) {
    for (size_t i = 0; i < m.edges.size(); ++i)
      adj[m.edges[i].tail].push_back((int)i);
  }

  boost::dynamic_bitset<> reach_alive() const {
    boost::dynamic_bitset<> seen(m.vcount());
    std::vector<int> stack{m.s};
    seen.set(m.s);
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int id : adj[v]) {
        if (removed[id]) continue;
        int w = m.edges[id].head;
        if (!seen.test(w)) {
          seen.set(w);
          stack.push_back(w);
        }
      }
    }
    return seen;
  }

  // Final feasibility check against the original budgets: count crossing
  // edges of the candidate side over all edges, removed or not.
  std::optional<CutSide> check_side(const boost::dynamic_bitset<>& side) const {
    std::vector<long long> used(m.budgets.size(), 0);
    long long crossing = 0;
    for (const auto& e : m.edges) {
      if (side.test(e.tail) && !side.test(e.head)) {
        if (e.cls < 0) return std::nullopt;  // uncuttable edge crosses
        ++used[e.cls];
        ++crossing;
      }
    }
    for (size_t i = 0; i < used.size(); ++i)
      if (used[i] > m.budgets[i]) return std::nullopt;
    CutSide out;
    out.members = side;
    out.value = Cost(crossing);
    return out;
  }

  // Lower bound on the number of cuttable edges any completion must still
  // cross: a unit-capacity min cut where exhausted classes are uncuttable.
  bool prune_by_flow(long long slack) const {
    DiGraph g;
    g.names = m.vertex_names;
    for (size_t i = 0; i < g.names.size(); ++i)
      g.index.emplace(g.names[i], (int)i);
    for (size_t id = 0; id < m.edges.size(); ++id) {
      if (removed[id]) continue;
      const auto& e = m.edges[id];
      bool cuttable = e.cls >= 0 && remaining[e.cls] > 0;
      g.edges.push_back({e.tail, e.head, cuttable ? Cost(1) : Cost::infinity()});
    }
    Cost bound = max_flow(g, m.s, m.t).value;
    return !(bound <= Cost(slack));
  }

  std::vector<int> shortest_path_edges() const {
    std::vector<int> parent_edge(m.vcount(), -1);
    std::vector<char> seen(m.vcount(), 0);
    std::queue<int> q;
    q.push(m.s);
    seen[m.s] = 1;
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      if (v == m.t) break;
      for (int id : adj[v]) {
        if (removed[id]) continue;
        int w = m.edges[id].head;
        if (!seen[w]) {
          seen[w] = 1;
          parent_edge[w] = id;
          q.push(w);
        }
      }
    }
    std::vector<int> path;
    for (int v = m.t; v != m.s;) {
      int id = parent_edge[v];
      path.push_back(id);
      v = m.edges[id].tail;
    }
    std::reverse(path.begin(), path.end());
    return path;
  }

  std::optional<CutSide> run() {
    ++stats::branch_nodes;
    auto reach = reach_alive();
    if (!reach.test(m.t)) return check_side(reach);

    long long slack = 0;
    for (long long r : remaining) slack += r;
    if (slack == 0 || prune_by_flow(slack)) return std::nullopt;

    for (int id : shortest_path_edges()) {
      const auto& e = m.edges[id];
      if (e.cls < 0 || remaining[e.cls] == 0) continue;
      removed[id] = 1;
      --remaining[e.cls];
      auto res = run();
      ++remaining[e.cls];
      removed[id] = 0;
      if (res) return res;
    }
    return std::nullopt;
  }
};

}  // namespace detail

// Branching search: delete one budget edge of a shortest s-t path at a time
// until t is unreachable, then accept the reachable side if it respects all
// budgets. Exponential only in the budget sum.
inline std::optional<CutSide> solve_mbdc(const MbdcInstance& m) {
  m.validate();
  for (const auto& e : m.edges)
    if (e.forbidden)
      throw InputError("budgeted-cut search requires eliminated instance");
  detail::MbdcSearch search(m);
  return search.run();
}

// ---------------------------------------------------------------------------
// Half-distance midpoint: a set within d1 of y1 and d2 of y2 exists exactly
// when |y1 ^ y2| <= d1 + d2; build one deterministically.
// ---------------------------------------------------------------------------

inline std::optional<ElemSet> midpoint(const ElemSet& y1, const ElemSet& y2,
                                       long long d1, long long d2) {
  ElemSet only1 = y1 & ~y2;
  ElemSet only2 = y2 & ~y1;
  long long a = (long long)only1.count();
  long long b = (long long)only2.count();
  if (a + b > d1 + d2) return std::nullopt;

  auto first_of = [](const ElemSet& s, long long take) {
    ElemSet out(s.size());
    long long got = 0;
    for (auto i = s.find_first(); i != ElemSet::npos && got < take;
         i = s.find_next(i), ++got)
      out.set(i);
    return out;
  };

  long long keep1, keep2;
  if (d1 == d2) {
    keep1 = a / 2;
    keep2 = b / 2;
  } else {
    // land exactly s1 = (a - keep1) + keep2 at min(d1, a + b)
    long long s1 = std::min(d1, a + b);
    if (s1 <= a) {
      keep1 = a - s1;
      keep2 = 0;
    } else {
      keep1 = 0;
      keep2 = s1 - a;
    }
  }
  ElemSet x = (y1 & y2) | first_of(only1, keep1) | first_of(only2, keep2);
  if ((long long)symdiff(x, y1) > d1 || (long long)symdiff(x, y2) > d2)
    throw InputError("midpoint construction out of budget");
  return x;
}

// ---------------------------------------------------------------------------
// Zero-threshold case: a common minimizer of all functions, read off the
// combined graph (no edge may cross, so t must be unreachable from s).
// ---------------------------------------------------------------------------

inline SolveOutcome solve_d0(const Instance& inst) {
  inst.validate();
  for (size_t i = 0; i < inst.k(); ++i)
    if (inst.threshold(i) != 0)
      throw InputError("zero-threshold solver needs all thresholds zero");
  if (inst.k() == 0)
    return SolveOutcome::feasible({empty_set(inst.universe), {}});

  auto lats = lattices_of(inst);
  MbdcBuild build = build_mbdc(inst, &lats);
  const MbdcInstance& m = build.instance;
  std::vector<std::vector<int>> adj(m.vcount());
  for (const auto& e : m.edges) adj[e.tail].push_back(e.head);
  boost::dynamic_bitset<> seen(m.vcount());
  std::vector<int> stack{m.s};
  seen.set(m.s);
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int w : adj[v])
      if (!seen.test(w)) {
        seen.set(w);
        stack.push_back(w);
      }
  }
  if (seen.test(m.t)) return SolveOutcome::infeasible();

  Solution sol;
  sol.x = empty_set(inst.universe);
  for (size_t i = 0; i < inst.universe.size(); ++i)
    if (seen.test(build.star[i])) sol.x.set(i);
  for (size_t j = 0; j < inst.k(); ++j) {
    if (!is_member(lats[j], sol.x))
      throw InputError("common-minimizer reconstruction failed");
    sol.witnesses.push_back({sol.x, 0});
  }
  return SolveOutcome::feasible(std::move(sol));
}

// ---------------------------------------------------------------------------
// Two functions: one min cut on the glued expansion graphs decides, the
// midpoint construction recovers a solution.
// ---------------------------------------------------------------------------

inline SolveOutcome solve_k2(const Instance& inst) {
  inst.validate();
  if (inst.k() > 2) throw InputError("pairwise solver needs at most 2 functions");
  if (inst.k() == 0)
    return SolveOutcome::feasible({empty_set(inst.universe), {}});
  auto lats = lattices_of(inst);
  if (inst.k() == 1) {
    ElemSet x = lats[0].u0;  // unique minimal member
    Solution sol;
    sol.x = x;
    sol.witnesses.push_back({x, 0});
    return SolveOutcome::feasible(std::move(sol));
  }

  const size_t n = inst.universe.size();
  DiGraph g;
  int s = g.ensure_vertex("s");
  int t = g.ensure_vertex("t");
  std::vector<std::vector<int>> copy(2, std::vector<int>(n));
  for (int j = 0; j < 2; ++j)
    for (size_t i = 0; i < n; ++i)
      copy[j][i] =
          g.ensure_vertex(inst.universe.ids[i] + "@" + std::to_string(j + 1));
  for (int j = 0; j < 2; ++j) {
    ExpandedGraph ex = expand_graph(lats[j]);
    auto remap = [&](int v) {
      if (v == ex.s) return s;
      if (v == ex.t) return t;
      return copy[j][ex.elem_of[v]];
    };
    for (const auto& e : ex.g.edges)
      g.add_edge(remap(e.tail), remap(e.head), Cost::infinity());
  }
  for (size_t i = 0; i < n; ++i) {
    g.add_edge(copy[0][i], copy[1][i], Cost(1));
    g.add_edge(copy[1][i], copy[0][i], Cost(1));
  }

  CutSide cut = min_cut(g, s, t);
  long long d1 = inst.threshold(0), d2 = inst.threshold(1);
  if (!(cut.value <= Cost(d1 + d2))) return SolveOutcome::infeasible();

  ElemSet y1 = empty_set(inst.universe), y2 = empty_set(inst.universe);
  for (size_t i = 0; i < n; ++i) {
    if (cut.members.test(copy[0][i])) y1.set(i);
    if (cut.members.test(copy[1][i])) y2.set(i);
  }
  auto x = midpoint(y1, y2, d1, d2);
  if (!x) throw InputError("midpoint missing despite feasible cut");
  Solution sol;
  sol.x = *x;
  sol.witnesses.push_back({y1, symdiff(*x, y1)});
  sol.witnesses.push_back({y2, symdiff(*x, y2)});
  return SolveOutcome::feasible(std::move(sol));
}

// ---------------------------------------------------------------------------
// General (k,d) route through the budgeted cut.
// ---------------------------------------------------------------------------

inline SolveOutcome solve_fpt_kd(const Instance& inst) {
  inst.validate();
  if (inst.k() == 0)
    return SolveOutcome::feasible({empty_set(inst.universe), {}});
  auto lats = lattices_of(inst);
  MbdcBuild build = build_mbdc(inst, &lats);
  MbdcInstance eliminated = eliminate_forbidden(build.instance);
  auto cut = solve_mbdc(eliminated);
  if (!cut) return SolveOutcome::infeasible();

  const size_t n = inst.universe.size();
  Solution sol;
  sol.x = empty_set(inst.universe);
  for (size_t i = 0; i < n; ++i)
    if (cut->members.test(build.star[i])) sol.x.set(i);
  for (size_t j = 0; j < inst.k(); ++j) {
    ElemSet y = empty_set(inst.universe);
    for (size_t i = 0; i < n; ++i)
      if (cut->members.test(build.copy[j][i])) y.set(i);
    if (!is_member(lats[j], y))
      throw InputError("budgeted-cut witness is not a minimizer");
    size_t dist = symdiff(sol.x, y);
    if ((long long)dist > inst.threshold(j))
      throw InputError("budgeted-cut witness out of budget");
    sol.witnesses.push_back({y, dist});
  }
  VerifyResult check = verify(inst, sol.x, &lats);
  if (!check.ok) throw InputError("budgeted-cut solution failed verification");
  return SolveOutcome::feasible(std::move(sol));
}

// ---------------------------------------------------------------------------
// Anchored search tree. Grows a difference set T inside Y0 ^ Yi via the
// block structure of a violated function, then branches on which element of
// T to toggle in the anchor.
// ---------------------------------------------------------------------------

namespace detail {

struct AsmContext {
  const std::vector<CompactLattice>& lats;
  const std::vector<long long>& thresholds;

  std::optional<Solution> solve(const ElemSet& y0, long long d0) {
    ++stats::branch_nodes;
    std::vector<GammaResult> gs;
    gs.reserve(lats.size());
    bool all_ok = true;
    for (size_t j = 0; j < lats.size(); ++j) {
      gs.push_back(gamma(lats[j], y0));
      if ((long long)gs.back().distance > thresholds[j]) all_ok = false;
    }
    if (all_ok) {
      Solution sol;
      sol.x = y0;
      for (auto& g : gs) sol.witnesses.push_back({g.nearest, g.distance});
      return sol;
    }
    if (d0 == 0) return std::nullopt;

    size_t violated = 0;
    while ((long long)gs[violated].distance <= thresholds[violated]) ++violated;
    const CompactLattice& lat = lats[violated];
    const long long di = thresholds[violated];
    const int b = (int)lat.blocks.size();
    // partition pieces: 0 = U0, 1..b = blocks, b+1 = Uinf
    auto piece = [&](int p) -> const ElemSet& {
      if (p == 0) return lat.u0;
      if (p <= b) return lat.blocks[p - 1];
      return lat.uinf;
    };

    // Explores the guess tree; forced moves and "contained = false" guesses
    // continue in-place, "contained = true" guesses recurse.
    std::function<std::optional<Solution>(ElemSet, std::vector<char>)> grow =
        [&](ElemSet t, std::vector<char> fixed) -> std::optional<Solution> {
      ++stats::branch_nodes;
      while (true) {
        ElemSet y = y0 ^ t;
        long long tsize = (long long)t.count();
        if (tsize > di + d0) return std::nullopt;
        if (tsize > di || is_member(lat, y)) {
          for (auto v = t.find_first(); v != ElemSet::npos;
               v = t.find_next(v)) {
            ElemSet next = y0;
            next.flip(v);
            auto res = solve(next, d0 - 1);
            if (res) return res;
          }
          return std::nullopt;
        }

        // whole-or-out violated? (partition piece straddling y)
        int partial = -1;
        for (int p = 0; p <= b + 1; ++p) {
          const ElemSet& s = piece(p);
          ElemSet in = s & y;
          if (in.any() && in != s) {
            partial = p;
            break;
          }
        }
        if (partial >= 0) {
          const ElemSet& s = piece(partial);
          {
            std::vector<char> f2 = fixed;
            f2[partial] = 1;
            auto res = grow(t | (s & ~y), std::move(f2));  // guess: inside
            if (res) return res;
          }
          t |= (s & y);  // guess: outside
          fixed[partial] = 1;
          continue;
        }

        // forced edge moves around U0 / Uinf
        if (lat.u0.any() && (lat.u0 & y).none()) {
          if (fixed[0]) return std::nullopt;
          t |= lat.u0;
          fixed[0] = 1;
          continue;
        }
        if (lat.uinf.any() && (lat.uinf & ~y).none()) {
          if (fixed[b + 1]) return std::nullopt;
          t |= lat.uinf;
          fixed[b + 1] = 1;
          continue;
        }

        // DAG edge leaving the chosen region
        bool acted = false;
        std::optional<Solution> from_guess;
        for (auto [from, to] : lat.dag) {
          const ElemSet& sf = piece(from);
          const ElemSet& st = piece(to);
          if (sf.none() || st.none()) continue;
          if (!(sf & ~y).none()) continue;  // from not inside y
          if ((st & y).any()) continue;     // to not fully outside
          if (fixed[from] && fixed[to]) return std::nullopt;
          if (fixed[from]) {
            t |= st;
            fixed[to] = 1;
          } else if (fixed[to]) {
            t |= sf;
            fixed[from] = 1;
          } else {
            std::vector<char> f2 = fixed;
            f2[from] = f2[to] = 1;
            from_guess = grow(t | st, std::move(f2));  // guess: from inside Yi
            if (from_guess) return from_guess;
            t |= sf;  // guess: from outside Yi
            fixed[from] = 1;
          }
          acted = true;
          break;
        }
        if (!acted) {
          // nothing fires only when y is a member; handled at loop top
          continue;
        }
      }
    };

    return grow(empty_set(lat.universe), std::vector<char>(b + 2, 0));
  }
};

}  // namespace detail

inline SolveOutcome solve_anchored(const AnchoredInstance& anchored) {
  anchored.validate();
  const Instance& inst = anchored.base;
  auto lats = lattices_of(inst);
  std::vector<long long> thresholds;
  for (size_t i = 0; i < inst.k(); ++i) thresholds.push_back(inst.threshold(i));
  detail::AsmContext ctx{lats, thresholds};
  auto res = ctx.solve(anchored.y0, anchored.d0);
  if (!res) return SolveOutcome::infeasible();
  return SolveOutcome::feasible(std::move(*res));
}

inline SolveOutcome solve_via_anchors(const Instance& inst,
                                      const Caps& caps = {}) {
  inst.validate();
  if (inst.k() == 0)
    return SolveOutcome::feasible({empty_set(inst.universe), {}});
  auto lats = lattices_of(inst);

  size_t anchor_fn = inst.k();
  size_t best_count = SIZE_MAX;
  for (size_t j = 0; j < inst.k(); ++j) {
    auto c = count_members(lats[j], caps.member_cap);
    if (c && *c < best_count) {
      best_count = *c;
      anchor_fn = j;
    }
  }
  if (anchor_fn == inst.k())
    return SolveOutcome::refused(
        "every minimizer family exceeds the enumeration cap of " +
        std::to_string(caps.member_cap));

  std::vector<CompactLattice> rest_lats;
  std::vector<long long> rest_thresholds;
  for (size_t j = 0; j < inst.k(); ++j) {
    if (j == anchor_fn) continue;
    rest_lats.push_back(lats[j]);
    rest_thresholds.push_back(inst.threshold(j));
  }
  detail::AsmContext ctx{rest_lats, rest_thresholds};
  long long d0 = inst.threshold(anchor_fn);

  auto members = enumerate_members(lats[anchor_fn], caps.member_cap);
  if (members.overflow)
    return SolveOutcome::refused("anchor enumeration overflowed its cap");
  for (const auto& y0 : members.members) {
    auto res = ctx.solve(y0, d0);
    if (!res) continue;
    Solution sol;
    sol.x = res->x;
    size_t at = 0;
    for (size_t j = 0; j < inst.k(); ++j) {
      if (j == anchor_fn)
        sol.witnesses.push_back({y0, symdiff(res->x, y0)});
      else
        sol.witnesses.push_back(res->witnesses[at++]);
    }
    return SolveOutcome::feasible(std::move(sol));
  }
  return SolveOutcome::infeasible();
}

// ---------------------------------------------------------------------------
// Closest string over set centers, and the minimizer-tuple enumeration.
// ---------------------------------------------------------------------------

inline std::optional<ElemSet> closest_string(
    const std::vector<ElemSet>& centers, const std::vector<long long>& radii) {
  if (centers.empty()) throw InputError("closest_string needs a center");
  if (centers.size() != radii.size())
    throw InputError("one radius per center required");
  for (long long r : radii)
    if (r < 0) throw InputError("negative radius");
  const size_t n = centers[0].size();
  for (const auto& c : centers)
    if (c.size() != n) throw InputError("centers over different universes");

  auto violated = [&](const ElemSet& x) -> int {
    for (size_t i = 0; i < centers.size(); ++i)
      if ((long long)symdiff(x, centers[i]) > radii[i]) return (int)i;
    return -1;
  };

  long long depth = std::min<long long>(radii[0], (long long)n);
  long long maxr = 0;
  for (long long r : radii) maxr = std::max(maxr, r);

  // tiny universes: plain enumeration when the tree would be larger
  if (n <= 20) {
    double tree = 1;
    for (long long i = 0; i < depth; ++i) tree *= (double)(maxr + 2);
    if (tree > (double)(1ull << n)) {
      for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
        ElemSet x(n, mask);
        if (violated(x) < 0) return x;
      }
      return std::nullopt;
    }
  }

  std::function<std::optional<ElemSet>(ElemSet, long long)> search =
      [&](ElemSet x, long long budget) -> std::optional<ElemSet> {
    ++stats::branch_nodes;
    int i = violated(x);
    if (i < 0) return x;
    if (budget == 0) return std::nullopt;
    ElemSet diff = x ^ centers[i];
    long long allowed = radii[i] + 1;  // any r_i+1 positions suffice
    long long taken = 0;
    for (auto v = diff.find_first(); v != ElemSet::npos && taken < allowed;
         v = diff.find_next(v), ++taken) {
      ElemSet next = x;
      next.flip(v);
      auto res = search(std::move(next), budget - 1);
      if (res) return res;
    }
    return std::nullopt;
  };
  return search(centers[0], depth);
}

inline SolveOutcome solve_enumerative(const Instance& inst,
                                      const Caps& caps = {}) {
  inst.validate();
  if (inst.k() == 0)
    return SolveOutcome::feasible({empty_set(inst.universe), {}});
  auto lats = lattices_of(inst);
  std::vector<std::vector<ElemSet>> families;
  size_t product = 1;
  bool too_big = false;
  for (const auto& lat : lats) {
    auto res = enumerate_members(lat, caps.member_cap);
    if (res.overflow) {
      return SolveOutcome::refused(
          "a minimizer family exceeds the enumeration cap of " +
          std::to_string(caps.member_cap));
    }
    if (product > caps.product_cap / std::max<size_t>(res.members.size(), 1))
      too_big = true;
    else
      product *= res.members.size();
    families.push_back(std::move(res.members));
  }
  if (too_big || product > caps.product_cap)
    return SolveOutcome::refused(
        "minimizer tuple count exceeds the product cap of " +
        std::to_string(caps.product_cap));

  std::vector<long long> radii;
  for (size_t i = 0; i < inst.k(); ++i) radii.push_back(inst.threshold(i));

  std::vector<size_t> pick(inst.k(), 0);
  std::vector<ElemSet> centers;
  while (true) {
    centers.clear();
    for (size_t i = 0; i < inst.k(); ++i) centers.push_back(families[i][pick[i]]);
    auto x = closest_string(centers, radii);
    if (x) {
      Solution sol;
      sol.x = *x;
      for (size_t i = 0; i < inst.k(); ++i)
        sol.witnesses.push_back({centers[i], symdiff(*x, centers[i])});
      return SolveOutcome::feasible(std::move(sol));
    }
    size_t at = inst.k();
    while (at > 0) {
      --at;
      if (++pick[at] < families[at].size()) break;
      pick[at] = 0;
      if (at == 0) return SolveOutcome::infeasible();
    }
  }
}

// ---------------------------------------------------------------------------
// Routing.
// ---------------------------------------------------------------------------

struct DispatchResult {
  SolveOutcome outcome;
  std::string algorithm;
};

inline DispatchResult dispatch(const Instance& inst,
                               const std::string& strategy = "auto",
                               const Caps& caps = {}) {
  inst.validate();
  if (strategy == "brute") return {solve_brute(inst, caps), "brute"};
  if (strategy == "d0") return {solve_d0(inst), "d0"};
  if (strategy == "k2") return {solve_k2(inst), "k2"};
  if (strategy == "fpt") return {solve_fpt_kd(inst), "fpt"};
  if (strategy == "anchored") return {solve_via_anchors(inst, caps), "anchored"};
  if (strategy == "enum") return {solve_enumerative(inst, caps), "enum"};
  if (strategy != "auto") throw InputError("unknown strategy: " + strategy);

  if (inst.k() == 0)
    return {SolveOutcome::feasible({empty_set(inst.universe), {}}), "d0"};

  bool all_zero = true;
  long long max_d = 0;
  for (size_t i = 0; i < inst.k(); ++i) {
    if (inst.threshold(i) != 0) all_zero = false;
    max_d = std::max(max_d, inst.threshold(i));
  }
  if (all_zero) return {solve_d0(inst), "d0"};
  if (inst.k() <= 2) return {solve_k2(inst), "k2"};

  auto lats = lattices_of(inst);
  size_t smallest = SIZE_MAX;
  size_t product = 1;
  bool product_overflow = false;
  for (const auto& lat : lats) {
    auto c = count_members(lat, caps.member_cap);
    size_t sz = c ? *c : SIZE_MAX;
    smallest = std::min(smallest, sz);
    if (!c || product > caps.product_cap / std::max<size_t>(sz, 1))
      product_overflow = true;
    else
      product *= sz;
  }
  if (smallest <= caps.member_cap)
    return {solve_via_anchors(inst, caps), "anchored"};
  if ((long long)inst.k() * max_d <= caps.budget_cap)
    return {solve_fpt_kd(inst), "fpt"};
  if (!product_overflow && product <= caps.product_cap)
    return {solve_enumerative(inst, caps), "enum"};
  if ((int)inst.universe.size() <= caps.brute_limit)
    return {solve_brute(inst, caps), "brute"};
  return {SolveOutcome::refused(
              "no applicable route: k=" + std::to_string(inst.k()) +
              ", max d=" + std::to_string(max_d) +
              ", |V|=" + std::to_string(inst.universe.size()) +
              "; member cap " + std::to_string(caps.member_cap) +
              ", budget cap " + std::to_string(caps.budget_cap) +
              ", product cap " + std::to_string(caps.product_cap) +
              ", brute limit " + std::to_string(caps.brute_limit) +
              " all exceeded"),
          "none"};
}

}  // namespace rsm
