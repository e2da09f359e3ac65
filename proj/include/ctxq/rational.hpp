#pragma once

#include <gmpxx.h>
#include <string>
#include <vector>

namespace ctxq {

using Rat = mpq_class;

// Accepts "3", "-3/4", "0.25", "1e-3", "2.5e2". Decimal strings convert exactly.
Rat parse_rational(const std::string& s);

// "0", "2", "-3/4" — always canonical (reduced, denominator > 0).
std::string rational_to_string(const Rat& r);

inline double to_double(const Rat& r) { return r.get_d(); }

Rat rat_abs(const Rat& r);

// Deterministic xorshift-based rational sampler used by test tooling: values k/denom, 0 <= k <= denom.
class RatSampler {
 public:
  explicit RatSampler(unsigned long seed, unsigned long denom = 1024) : state_(seed ? seed : 1), denom_(denom) {}
  Rat unit();                       // in [0, 1]
  Rat range(const Rat& lo, const Rat& hi);
  unsigned long integer(unsigned long n);  // in [0, n)
  double real();                    // in [0, 1)
 private:
  unsigned long next();
  unsigned long state_;
  unsigned long denom_;
};

}  // namespace ctxq
