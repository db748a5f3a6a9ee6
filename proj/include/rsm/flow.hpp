#pragma once

#include <queue>
#include <vector>

#include "rsm/core.hpp"
#include "rsm/digraph.hpp"

namespace rsm {

struct MaxFlowResult {
  Cost value;
  // All arcs with positive remaining capacity: unsaturated forward arcs
  // (capacity minus flow, infinite stays infinite) plus reverse arcs
  // carrying the pushed flow.
  DiGraph residual;
};

namespace detail {

// Dinic over exact costs. Infinite capacities stay symbolic: the caller
// rules out all-infinite augmenting paths first, so every bottleneck
// computed here is finite.
class FlowNet {
 public:
  explicit FlowNet(const DiGraph& g) : n_((int)g.vcount()), adj_(g.vcount()) {
    for (const auto& e : g.edges) {
      arcs_.push_back({e.head, e.cost, Rat(0)});
      adj_[e.tail].push_back((int)arcs_.size() - 1);
      arcs_.push_back({e.tail, Cost(0), Rat(0)});
      adj_[e.head].push_back((int)arcs_.size() - 1);
    }
  }

  Cost run(int s, int t) {
    Cost total = 0;
    while (build_levels(s, t)) {
      ptr_.assign(n_, 0);
      while (true) {
        Rat pushed = push(s, t, Cost::infinity());
        if (pushed == Rat(0)) break;
        total += Cost(pushed);
      }
    }
    return total;
  }

  DiGraph residual_of(const DiGraph& g) const {
    DiGraph r;
    r.names = g.names;
    r.index = g.index;
    for (int v = 0; v < n_; ++v) {
      for (int id : adj_[v]) {
        Cost rem = remaining(id);
        if (rem > Cost(0)) r.edges.push_back({v, arcs_[id].to, rem});
      }
    }
    return r;
  }

 private:
  struct Arc {
    int to;
    Cost cap;
    Rat flow;  // forward arcs accumulate flow; reverse arcs keep cap 0
  };

  Cost remaining(int id) const {
    const Arc& a = arcs_[id];
    if ((id & 1) == 0) return a.cap - Cost(a.flow);  // forward
    return Cost(arcs_[id ^ 1].flow);                 // reverse: undo room
  }

  bool build_levels(int s, int t) {
    level_.assign(n_, -1);
    std::queue<int> q;
    level_[s] = 0;
    q.push(s);
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (int id : adj_[v]) {
        int w = arcs_[id].to;
        if (level_[w] < 0 && remaining(id) > Cost(0)) {
          level_[w] = level_[v] + 1;
          q.push(w);
        }
      }
    }
    return level_[t] >= 0;
  }

  Rat push(int v, int t, Cost limit) {
    if (v == t) {
      if (!limit.is_finite())
        throw InputError("unbounded augmenting path; infinite cut undetected");
      return limit.value;
    }
    for (int& i = ptr_[v]; i < (int)adj_[v].size(); ++i) {
      int id = adj_[v][i];
      int w = arcs_[id].to;
      if (level_[w] != level_[v] + 1) continue;
      Cost rem = remaining(id);
      if (!(rem > Cost(0))) continue;
      Rat got = push(w, t, min(limit, rem));
      if (got == Rat(0)) continue;
      if ((id & 1) == 0)
        arcs_[id].flow = arcs_[id].flow + got;
      else
        arcs_[id ^ 1].flow = arcs_[id ^ 1].flow - got;
      return got;
    }
    return Rat(0);
  }

  int n_;
  std::vector<Arc> arcs_;
  std::vector<std::vector<int>> adj_;
  std::vector<int> level_;
  std::vector<int> ptr_;
};

inline boost::dynamic_bitset<> reachable(const DiGraph& g, int from) {
  boost::dynamic_bitset<> seen(g.vcount());
  std::vector<std::vector<int>> adj(g.vcount());
  for (const auto& e : g.edges) adj[e.tail].push_back(e.head);
  std::vector<int> stack{from};
  seen.set(from);
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int w : adj[v])
      if (!seen.test(w)) {
        seen.set(w);
        stack.push_back(w);
      }
  }
  return seen;
}

// True when t is reachable from s through infinite-capacity edges alone,
// i.e. no finite (s,t)-cut exists.
inline bool infinite_path_exists(const DiGraph& g, int s, int t) {
  DiGraph inf_only;
  inf_only.names = g.names;
  inf_only.index = g.index;
  for (const auto& e : g.edges)
    if (!e.cost.is_finite()) inf_only.edges.push_back(e);
  return reachable(inf_only, s).test(t);
}

}  // namespace detail

inline MaxFlowResult max_flow(const DiGraph& g, int s, int t) {
  if (s == t || s < 0 || t < 0 || s >= (int)g.vcount() || t >= (int)g.vcount())
    throw InputError("max_flow requires distinct vertices s and t");
  ++stats::flow_calls;
  if (detail::infinite_path_exists(g, s, t)) {
    // No finite cut; the residual is meaningless in this state.
    DiGraph r;
    r.names = g.names;
    r.index = g.index;
    r.edges = g.edges;
    return {Cost::infinity(), std::move(r)};
  }
  detail::FlowNet net(g);
  Cost value = net.run(s, t);
  return {value, net.residual_of(g)};
}

// The minimal minimum (s,t)-cut: vertices reachable from s in the residual
// graph. When no finite cut exists, value is infinite and members holds the
// set reachable via infinite edges.
inline CutSide min_cut(const DiGraph& g, int s, int t) {
  MaxFlowResult mf = max_flow(g, s, t);
  CutSide side;
  side.value = mf.value;
  if (!mf.value.is_finite()) {
    DiGraph inf_only;
    inf_only.names = g.names;
    inf_only.index = g.index;
    for (const auto& e : g.edges)
      if (!e.cost.is_finite()) inf_only.edges.push_back(e);
    side.members = detail::reachable(inf_only, s);
    return side;
  }
  side.members = detail::reachable(mf.residual, s);
  return side;
}

}  // namespace rsm
