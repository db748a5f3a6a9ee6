#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rsm/core.hpp"
#include "rsm/lattice.hpp"
#include "rsm/submod.hpp"

namespace rsm {

// A problem instance: k functions over a common ground set, a distance
// threshold d, and optionally a separate threshold per function.
// k = 0 is allowed and trivially feasible with the empty set.
struct Instance {
  Universe universe;
  std::vector<FunctionSpec> functions;
  long long d = 0;
  std::vector<long long> per_function_d;  // size k; defaults to all = d

  size_t k() const { return functions.size(); }
  long long threshold(size_t i) const { return per_function_d.at(i); }

  void validate() const {
    if (d < 0) throw InputError("threshold d must be non-negative");
    if (per_function_d.size() != functions.size())
      throw InputError("per-function threshold list has wrong length");
    for (long long di : per_function_d)
      if (di < 0) throw InputError("per-function threshold must be non-negative");
    for (const auto& f : functions) {
      if (!(f.universe == universe))
        throw InputError("function over a different ground set");
      f.validate();
    }
  }

  static Instance make(Universe u, std::vector<FunctionSpec> fns, long long d,
                       std::vector<long long> per_fn_d = {}) {
    Instance inst;
    inst.universe = std::move(u);
    inst.functions = std::move(fns);
    inst.d = d;
    inst.per_function_d = per_fn_d.empty()
                              ? std::vector<long long>(inst.functions.size(), d)
                              : std::move(per_fn_d);
    inst.validate();
    return inst;
  }
};

struct Witness {
  ElemSet y;        // a minimizer of function i
  size_t distance;  // |x ^ y|
};

struct Solution {
  ElemSet x;
  std::vector<Witness> witnesses;  // one per function
};

enum class Status { Feasible, Infeasible, Refused };

struct SolveOutcome {
  Status status = Status::Infeasible;
  std::optional<Solution> solution;
  std::string note;  // refusal reason / sizing report

  static SolveOutcome feasible(Solution s) {
    return {Status::Feasible, std::move(s), ""};
  }
  static SolveOutcome infeasible() { return {Status::Infeasible, {}, ""}; }
  static SolveOutcome refused(std::string why) {
    return {Status::Refused, {}, std::move(why)};
  }
  bool is_feasible() const { return status == Status::Feasible; }
};

// Size caps; refusals name the cap they hit.
struct Caps {
  size_t member_cap = 1000000;   // lattice enumeration
  size_t product_cap = 1000000;  // minimizer tuples
  int brute_limit = 20;          // ground set size for exhaustive search
  long long budget_cap = 16;     // k * max threshold for the budgeted-cut route
};

inline std::vector<CompactLattice> lattices_of(const Instance& inst) {
  std::vector<CompactLattice> out;
  out.reserve(inst.k());
  for (const auto& f : inst.functions) out.push_back(to_lattice(f));
  return out;
}

struct VerifyResult {
  bool ok = true;
  std::vector<size_t> distances;  // gamma_i(x) per function
  std::vector<ElemSet> nearest;   // witness members attaining them
};

inline VerifyResult verify(const Instance& inst, const ElemSet& x,
                           const std::vector<CompactLattice>* lats = nullptr) {
  if (x.size() != inst.universe.size())
    throw InputError("verify: set over wrong universe");
  std::vector<CompactLattice> local;
  if (!lats) {
    local = lattices_of(inst);
    lats = &local;
  }
  VerifyResult res;
  for (size_t i = 0; i < inst.k(); ++i) {
    GammaResult g = gamma((*lats)[i], x);
    res.distances.push_back(g.distance);
    res.nearest.push_back(g.nearest);
    if ((long long)g.distance > inst.threshold(i)) res.ok = false;
  }
  return res;
}

// An instance with a hard anchor: solutions must also stay within d0 of Y0.
struct AnchoredInstance {
  Instance base;
  ElemSet y0;
  long long d0 = 0;

  void validate() const {
    base.validate();
    if (y0.size() != base.universe.size())
      throw InputError("anchor over wrong universe");
    if (d0 < 0) throw InputError("anchor budget must be non-negative");
    if (d0 > base.d) throw InputError("anchor budget exceeds threshold d");
  }
};

}  // namespace rsm
