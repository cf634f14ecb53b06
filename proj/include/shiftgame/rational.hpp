#pragma once

#include <cstdint>
#include <numeric>
#include <string>

#include "shiftgame/error.hpp"

namespace shiftgame {

// Exact rational on int64 with __int128 intermediates. Always normalized:
// den > 0, gcd(|num|, den) == 1. Large enough for every ratio in this
// project (numerators/denominators stay well below 2^63 after reduction).
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Rational() = default;
  Rational(std::int64_t n) : num(n), den(1) {}
  Rational(std::int64_t n, std::int64_t d) : num(n), den(d) { normalize(); }

  void normalize() {
    if (den == 0) fail(ErrorKind::precondition, "rational with zero denominator");
    if (den < 0) { num = -num; den = -den; }
    std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) { num /= g; den /= g; }
  }

  static Rational from128(__int128 n, __int128 d) {
    if (d == 0) fail(ErrorKind::precondition, "rational with zero denominator");
    if (d < 0) { n = -n; d = -d; }
    __int128 a = n < 0 ? -n : n, b = d;
    while (b) { __int128 t = a % b; a = b; b = t; }
    if (a > 1) { n /= a; d /= a; }
    if (n > INT64_MAX || n < INT64_MIN || d > INT64_MAX)
      fail(ErrorKind::capacity, "rational overflow after reduction");
    Rational r;
    r.num = static_cast<std::int64_t>(n);
    r.den = static_cast<std::int64_t>(d);
    return r;
  }

  friend Rational operator+(Rational a, Rational b) {
    return from128((__int128)a.num * b.den + (__int128)b.num * a.den,
                   (__int128)a.den * b.den);
  }
  friend Rational operator-(Rational a, Rational b) {
    return from128((__int128)a.num * b.den - (__int128)b.num * a.den,
                   (__int128)a.den * b.den);
  }
  friend Rational operator*(Rational a, Rational b) {
    return from128((__int128)a.num * b.num, (__int128)a.den * b.den);
  }
  friend Rational operator/(Rational a, Rational b) {
    if (b.num == 0) fail(ErrorKind::precondition, "rational division by zero");
    return from128((__int128)a.num * b.den, (__int128)a.den * b.num);
  }

  friend bool operator==(Rational a, Rational b) {
    return a.num == b.num && a.den == b.den;
  }
  friend bool operator!=(Rational a, Rational b) { return !(a == b); }
  friend bool operator<(Rational a, Rational b) {
    return (__int128)a.num * b.den < (__int128)b.num * a.den;
  }
  friend bool operator<=(Rational a, Rational b) {
    return (__int128)a.num * b.den <= (__int128)b.num * a.den;
  }
  friend bool operator>(Rational a, Rational b) { return b < a; }
  friend bool operator>=(Rational a, Rational b) { return b <= a; }

  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

  std::string str() const {
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
  }
};

}  // namespace shiftgame
