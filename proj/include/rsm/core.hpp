#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include <boost/dynamic_bitset.hpp>

namespace rsm {

// Thrown for malformed inputs and violated structural invariants (CLI exit 2).
struct InputError : std::runtime_error {
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when an operation is asked to exceed a configured size cap.
struct CapError : std::runtime_error {
  explicit CapError(const std::string& what) : std::runtime_error(what) {}
};

// ---------------------------------------------------------------------------
// Exact rational arithmetic. Cut values decide feasibility by exact
// comparison, so no floating point anywhere near costs.
// ---------------------------------------------------------------------------

class Rat {
 public:
  Rat() = default;
  Rat(long long n) : num_(n), den_(1) {}  // NOLINT: implicit by design of call sites
  Rat(long long n, long long d) : num_(n), den_(d) { normalize(); }

  long long num() const { return num_; }
  long long den() const { return den_; }
  bool is_integer() const { return den_ == 1; }

  friend Rat operator+(const Rat& a, const Rat& b) {
    return from128(i128(a.num_) * b.den_ + i128(b.num_) * a.den_,
                   i128(a.den_) * b.den_);
  }
  friend Rat operator-(const Rat& a, const Rat& b) {
    return from128(i128(a.num_) * b.den_ - i128(b.num_) * a.den_,
                   i128(a.den_) * b.den_);
  }
  friend Rat operator*(const Rat& a, const Rat& b) {
    return from128(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
  }
  friend bool operator==(const Rat& a, const Rat& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator<(const Rat& a, const Rat& b) {
    return i128(a.num_) * b.den_ < i128(b.num_) * a.den_;
  }
  friend bool operator<=(const Rat& a, const Rat& b) { return !(b < a); }
  friend bool operator>(const Rat& a, const Rat& b) { return b < a; }
  friend bool operator>=(const Rat& a, const Rat& b) { return !(a < b); }
  friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }

  // Accepts "12", "-3", "1.5", "0.25". Decimal digits become an exact
  // power-of-ten denominator.
  static Rat parse(const std::string& text) {
    std::string s = text;
    if (s.empty()) throw InputError("empty number literal");
    bool neg = false;
    size_t i = 0;
    if (s[0] == '+' || s[0] == '-') {
      neg = (s[0] == '-');
      i = 1;
    }
    long long ipart = 0, fpart = 0, fden = 1;
    bool saw_digit = false, saw_dot = false;
    for (; i < s.size(); ++i) {
      char c = s[i];
      if (c == '.') {
        if (saw_dot) throw InputError("bad number literal: " + text);
        saw_dot = true;
      } else if (c >= '0' && c <= '9') {
        saw_digit = true;
        if (!saw_dot) {
          ipart = ipart * 10 + (c - '0');
        } else {
          if (fden > 1000000000000000LL)
            throw InputError("number literal too precise: " + text);
          fpart = fpart * 10 + (c - '0');
          fden *= 10;
        }
      } else {
        throw InputError("bad number literal: " + text);
      }
    }
    if (!saw_digit) throw InputError("bad number literal: " + text);
    Rat r = Rat(ipart) + Rat(fpart, fden);
    if (neg) r = Rat(0) - r;
    return r;
  }

  // Decimal string when the denominator is 2^a*5^b, else "num/den".
  std::string to_string() const {
    if (den_ == 1) return std::to_string(num_);
    long long d = den_;
    int twos = 0, fives = 0;
    while (d % 2 == 0) { d /= 2; ++twos; }
    while (d % 5 == 0) { d /= 5; ++fives; }
    if (d != 1) return std::to_string(num_) + "/" + std::to_string(den_);
    int digits = std::max(twos, fives);
    i128 scaled = i128(num_);
    for (int i = 0; i < digits; ++i) scaled *= 10;
    scaled /= den_;
    bool neg = scaled < 0;
    if (neg) scaled = -scaled;
    std::string body;
    for (i128 v = scaled; v > 0 || body.empty(); v /= 10)
      body.push_back(char('0' + int(v % 10)));
    while ((int)body.size() <= digits) body.push_back('0');
    std::reverse(body.begin(), body.end());
    body.insert(body.size() - digits, ".");
    return (neg ? "-" : "") + body;
  }

 private:
  using i128 = __int128;
  long long num_ = 0;
  long long den_ = 1;

  static Rat from128(i128 n, i128 d) {
    if (d == 0) throw InputError("zero denominator");
    if (d < 0) { n = -n; d = -d; }
    i128 g = gcd128(n < 0 ? -n : n, d);
    if (g > 1) { n /= g; d /= g; }
    Rat r;
    r.num_ = (long long)n;
    r.den_ = (long long)d;
    return r;
  }
  static i128 gcd128(i128 a, i128 b) {
    while (b != 0) { i128 t = a % b; a = b; b = t; }
    return a == 0 ? 1 : a;
  }
  void normalize() {
    Rat r = from128(num_, den_);
    num_ = r.num_;
    den_ = r.den_;
  }
};

// Extended non-negative cost: a finite rational or symbolic +infinity.
// Addition saturates; infinity is never approximated by a big constant.
struct Cost {
  bool inf = false;
  Rat value;

  Cost() = default;
  Cost(long long v) : value(v) {}  // NOLINT
  Cost(Rat v) : value(v) {}        // NOLINT
  static Cost infinity() {
    Cost c;
    c.inf = true;
    return c;
  }

  bool is_finite() const { return !inf; }

  friend Cost operator+(const Cost& a, const Cost& b) {
    if (a.inf || b.inf) return infinity();
    return Cost(a.value + b.value);
  }
  Cost& operator+=(const Cost& o) { return *this = *this + o; }

  // a - b with b finite and b <= a; infinite a stays infinite.
  friend Cost operator-(const Cost& a, const Cost& b) {
    if (b.inf) throw InputError("cannot subtract an infinite cost");
    if (a.inf) return infinity();
    return Cost(a.value - b.value);
  }

  friend bool operator==(const Cost& a, const Cost& b) {
    if (a.inf || b.inf) return a.inf == b.inf;
    return a.value == b.value;
  }
  friend bool operator!=(const Cost& a, const Cost& b) { return !(a == b); }
  friend bool operator<(const Cost& a, const Cost& b) {
    if (a.inf) return false;
    if (b.inf) return true;
    return a.value < b.value;
  }
  friend bool operator<=(const Cost& a, const Cost& b) { return !(b < a); }
  friend bool operator>(const Cost& a, const Cost& b) { return b < a; }
  friend bool operator>=(const Cost& a, const Cost& b) { return !(a < b); }

  std::string to_string() const { return inf ? "inf" : value.to_string(); }
};

inline Cost min(const Cost& a, const Cost& b) { return a < b ? a : b; }

// ---------------------------------------------------------------------------
// Ground set and element subsets.
// ---------------------------------------------------------------------------

// Element ids are opaque strings; the canonical element order is the
// lexicographic order of ids, fixed once at construction.
struct Universe {
  std::vector<std::string> ids;  // sorted, unique
  std::unordered_map<std::string, int> pos;

  Universe() = default;
  explicit Universe(std::vector<std::string> raw) {
    std::sort(raw.begin(), raw.end());
    for (size_t i = 0; i + 1 < raw.size(); ++i)
      if (raw[i] == raw[i + 1])
        throw InputError("duplicate element id: " + raw[i]);
    ids = std::move(raw);
    for (size_t i = 0; i < ids.size(); ++i) pos.emplace(ids[i], (int)i);
  }

  size_t size() const { return ids.size(); }
  bool contains(const std::string& id) const { return pos.count(id) > 0; }
  int index(const std::string& id) const {
    auto it = pos.find(id);
    if (it == pos.end()) throw InputError("unknown element id: " + id);
    return it->second;
  }
  const std::string& id_of(size_t i) const { return ids.at(i); }

  friend bool operator==(const Universe& a, const Universe& b) {
    return a.ids == b.ids;
  }
};

using ElemSet = boost::dynamic_bitset<>;

inline ElemSet empty_set(const Universe& u) { return ElemSet(u.size()); }

inline ElemSet full_set(const Universe& u) {
  ElemSet s(u.size());
  s.set();
  return s;
}

inline ElemSet make_set(const Universe& u,
                        const std::vector<std::string>& members) {
  ElemSet s(u.size());
  for (const auto& id : members) s.set(u.index(id));
  return s;
}

inline std::vector<std::string> set_ids(const Universe& u, const ElemSet& s) {
  std::vector<std::string> out;
  for (auto i = s.find_first(); i != ElemSet::npos; i = s.find_next(i))
    out.push_back(u.ids[i]);
  return out;
}

inline size_t symdiff(const ElemSet& a, const ElemSet& b) {
  return (a ^ b).count();
}

// Lexicographic order on the sorted id sequences of two subsets.
inline bool canonical_less(const ElemSet& a, const ElemSet& b) {
  auto i = a.find_first(), j = b.find_first();
  while (i != ElemSet::npos && j != ElemSet::npos) {
    if (i != j) return i < j;
    i = a.find_next(i);
    j = b.find_next(j);
  }
  return i == ElemSet::npos && j != ElemSet::npos;
}

struct CanonicalLess {
  bool operator()(const ElemSet& a, const ElemSet& b) const {
    return canonical_less(a, b);
  }
};

inline std::vector<size_t> set_indices(const ElemSet& s) {
  std::vector<size_t> out;
  for (auto i = s.find_first(); i != ElemSet::npos; i = s.find_next(i))
    out.push_back(i);
  return out;
}

// Per-invocation counters surfaced in CLI reports. Thread-local so
// independent instances may run in parallel.
namespace stats {
inline thread_local long long flow_calls = 0;
inline thread_local long long branch_nodes = 0;
inline void reset() {
  flow_calls = 0;
  branch_nodes = 0;
}
}  // namespace stats

}  // namespace rsm
