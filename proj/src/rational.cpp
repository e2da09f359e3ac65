#include "ctxq/rational.hpp"

#include <cctype>
#include <cstdlib>
#include <stdexcept>

namespace ctxq {

namespace {

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

// Parses a decimal literal like "-12.345" into an exact fraction.
Rat parse_decimal(const std::string& s) {
  std::string t = s;
  bool neg = false;
  if (!t.empty() && (t[0] == '+' || t[0] == '-')) {
    neg = t[0] == '-';
    t = t.substr(1);
  }
  auto dot = t.find('.');
  std::string whole = dot == std::string::npos ? t : t.substr(0, dot);
  std::string frac = dot == std::string::npos ? "" : t.substr(dot + 1);
  if (whole.empty() && frac.empty()) throw std::invalid_argument("bad number: '" + s + "'");
  if (!whole.empty() && !all_digits(whole)) throw std::invalid_argument("bad number: '" + s + "'");
  if (!frac.empty() && !all_digits(frac)) throw std::invalid_argument("bad number: '" + s + "'");
  Rat value(whole.empty() ? "0" : whole);
  if (!frac.empty()) {
    mpz_class num(frac);
    mpz_class den(1);
    for (size_t i = 0; i < frac.size(); ++i) den *= 10;
    value += Rat(num) / Rat(den);
  }
  return neg ? -value : value;
}

}  // namespace

Rat parse_rational(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty number");
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    Rat num = parse_decimal(s.substr(0, slash));
    Rat den = parse_decimal(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
    Rat r = num / den;
    r.canonicalize();
    return r;
  }
  auto epos = s.find_first_of("eE");
  if (epos != std::string::npos) {
    Rat mant = parse_decimal(s.substr(0, epos));
    std::string expstr = s.substr(epos + 1);
    if (expstr.empty()) throw std::invalid_argument("bad exponent in '" + s + "'");
    char* end = nullptr;
    long exp = std::strtol(expstr.c_str(), &end, 10);
    if (end == nullptr || *end != '\0') throw std::invalid_argument("bad exponent in '" + s + "'");
    Rat scale(1);
    Rat ten(10);
    for (long i = 0; i < (exp < 0 ? -exp : exp); ++i) scale *= ten;
    Rat r = exp < 0 ? Rat(mant / scale) : Rat(mant * scale);
    r.canonicalize();
    return r;
  }
  Rat r = parse_decimal(s);
  r.canonicalize();
  return r;
}

std::string rational_to_string(const Rat& r) {
  Rat c = r;
  c.canonicalize();
  return c.get_str();
}

Rat rat_abs(const Rat& r) { return r < 0 ? Rat(-r) : r; }

unsigned long RatSampler::next() {
  // xorshift64
  unsigned long x = state_;
  x ^= x << 13;
  x ^= x >> 7;
  x ^= x << 17;
  state_ = x;
  return x;
}

Rat RatSampler::unit() {
  unsigned long k = next() % (denom_ + 1);
  Rat r(static_cast<long>(k), static_cast<long>(denom_));
  r.canonicalize();
  return r;
}

Rat RatSampler::range(const Rat& lo, const Rat& hi) { return lo + unit() * (hi - lo); }

unsigned long RatSampler::integer(unsigned long n) {
  if (n == 0) throw std::invalid_argument("integer(0)");
  return next() % n;
}

double RatSampler::real() {
  return static_cast<double>(next() >> 11) / 9007199254740992.0;  // 2^53
}

}  // namespace ctxq
