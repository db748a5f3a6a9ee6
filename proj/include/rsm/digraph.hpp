#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "rsm/core.hpp"

namespace rsm {

// Directed graph with non-negative extended-real edge costs.
// No self-loops; parallel edges allowed (their costs add under cuts).
struct DiGraph {
  struct Edge {
    int tail;
    int head;
    Cost cost;
  };

  std::vector<std::string> names;
  std::unordered_map<std::string, int> index;
  std::vector<Edge> edges;

  size_t vcount() const { return names.size(); }

  int ensure_vertex(const std::string& name) {
    auto it = index.find(name);
    if (it != index.end()) return it->second;
    int id = (int)names.size();
    names.push_back(name);
    index.emplace(name, id);
    return id;
  }

  int vertex(const std::string& name) const {
    auto it = index.find(name);
    if (it == index.end()) throw InputError("unknown vertex: " + name);
    return it->second;
  }

  bool has_vertex(const std::string& name) const {
    return index.count(name) > 0;
  }

  void add_edge(int tail, int head, Cost cost) {
    if (tail == head) throw InputError("self-loop at vertex " + names.at(tail));
    if (tail < 0 || head < 0 || tail >= (int)names.size() ||
        head >= (int)names.size())
      throw InputError("edge endpoint out of range");
    if (cost.is_finite() && cost.value < Rat(0))
      throw InputError("negative edge cost");
    edges.push_back({tail, head, cost});
  }

  // Total cost of edges leaving `side`.
  Cost cut_value(const boost::dynamic_bitset<>& side) const {
    Cost total = 0;
    for (const auto& e : edges)
      if (side.test(e.tail) && !side.test(e.head)) total += e.cost;
    return total;
  }
};

// One side of an (s,t)-cut: the vertex set containing s, with its cost.
struct CutSide {
  boost::dynamic_bitset<> members;  // over graph vertex indices
  Cost value;
};

}  // namespace rsm
