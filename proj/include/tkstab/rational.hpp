#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <stdexcept>
#include <string>
#include <vector>

namespace tkstab {

// Exact arithmetic types. All verdict-bearing computations in this library
// are carried out over Rat; doubles appear only in the numeric quadrature
// and finite-difference layers.
using Rat = boost::multiprecision::mpq_rational;
using ZInt = boost::multiprecision::mpz_int;
using RatVec = std::vector<Rat>;
using ZVec = std::vector<ZInt>;
using VecD = std::vector<double>;

inline double to_double(const Rat& q) { return q.template convert_to<double>(); }

inline int sgn(const Rat& q) { return q.sign(); }

/// Formats a rational canonically as "p" or "p/q" (q > 0).
inline std::string format_rational(const Rat& q) { return q.str(); }

/// Parses "p", "p/q", or a decimal string like "-2.75" exactly.
inline Rat parse_rational(const std::string& raw) {
  std::string s;
  for (char c : raw)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) throw std::invalid_argument("empty rational literal");

  auto dot = s.find('.');
  if (dot == std::string::npos) {
    try {
      Rat q(s);  // GMP accepts "p" and "p/q"
      if (denominator(q) == 0) throw std::invalid_argument("zero denominator");
      return q;
    } catch (const std::exception&) {
      throw std::invalid_argument("bad rational literal: " + raw);
    }
  }

  bool neg = false;
  std::string body = s;
  if (body[0] == '+' || body[0] == '-') {
    neg = body[0] == '-';
    body = body.substr(1);
    dot -= 1;
  }
  std::string ip = body.substr(0, dot), fp = body.substr(dot + 1);
  if (ip.empty()) ip = "0";
  for (char c : ip + fp)
    if (!std::isdigit(static_cast<unsigned char>(c)))
      throw std::invalid_argument("bad decimal literal: " + raw);
  ZInt scale = 1;
  for (size_t i = 0; i < fp.size(); ++i) scale *= 10;
  ZInt num = ZInt(ip) * scale + (fp.empty() ? ZInt(0) : ZInt(fp));
  Rat q(num, scale);
  return neg ? -q : q;
}

inline Rat dot(const RatVec& a, const RatVec& b) {
  Rat r = 0;
  for (size_t i = 0; i < a.size(); ++i) r += a[i] * b[i];
  return r;
}

inline Rat dot(const ZVec& a, const RatVec& b) {
  Rat r = 0;
  for (size_t i = 0; i < a.size(); ++i) r += Rat(a[i]) * b[i];
  return r;
}

inline RatVec to_ratvec(const ZVec& a) {
  RatVec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = Rat(a[i]);
  return r;
}

inline VecD to_doubles(const RatVec& a) {
  VecD r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = to_double(a[i]);
  return r;
}

inline bool is_zero_vec(const RatVec& a) {
  for (const auto& x : a)
    if (x != 0) return false;
  return true;
}

// Lexicographic comparison used everywhere deterministic ordering matters.
inline bool lex_less(const RatVec& a, const RatVec& b) {
  for (size_t i = 0; i < a.size() && i < b.size(); ++i) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return a.size() < b.size();
}

}  // namespace tkstab
