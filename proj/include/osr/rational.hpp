#pragma once

// Exact rational arithmetic on 64-bit components.
// Values stay tiny in this domain (clock readings, positions); every operation
// checks for overflow anyway and throws rather than wrapping.

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace osr {

struct RationalOverflow : std::runtime_error {
  RationalOverflow() : std::runtime_error("rational overflow") {}
};

class Rational {
public:
  Rational() : num_(0), den_(1) {}
  Rational(std::int64_t n) : num_(n), den_(1) {}
  Rational(std::int64_t n, std::int64_t d) : num_(n), den_(d) {
    if (den_ == 0) throw std::runtime_error("rational with zero denominator");
    normalize();
  }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  bool is_integer() const { return den_ == 1; }
  bool is_zero() const { return num_ == 0; }
  bool is_nonneg_integer() const { return den_ == 1 && num_ >= 0; }

  Rational operator+(const Rational& o) const {
    __int128 n = (__int128)num_ * o.den_ + (__int128)o.num_ * den_;
    __int128 d = (__int128)den_ * o.den_;
    return from_wide(n, d);
  }
  Rational operator-() const { return Rational(-num_, den_); }
  Rational operator-(const Rational& o) const { return *this + (-o); }
  Rational operator*(const Rational& o) const {
    return from_wide((__int128)num_ * o.num_, (__int128)den_ * o.den_);
  }

  bool operator==(const Rational& o) const { return num_ == o.num_ && den_ == o.den_; }
  bool operator!=(const Rational& o) const { return !(*this == o); }
  bool operator<(const Rational& o) const {
    return (__int128)num_ * o.den_ < (__int128)o.num_ * den_;
  }
  bool operator<=(const Rational& o) const {
    return (__int128)num_ * o.den_ <= (__int128)o.num_ * den_;
  }
  bool operator>(const Rational& o) const { return o < *this; }
  bool operator>=(const Rational& o) const { return o <= *this; }

  std::string str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  // Parses "5", "-3", "5/4", "-3/2". Returns false on malformed input.
  static bool parse(const std::string& text, Rational& out) {
    if (text.empty()) return false;
    std::size_t slash = text.find('/');
    try {
      std::size_t used = 0;
      if (slash == std::string::npos) {
        std::int64_t n = std::stoll(text, &used);
        if (used != text.size()) return false;
        out = Rational(n);
        return true;
      }
      std::string ns = text.substr(0, slash), ds = text.substr(slash + 1);
      if (ns.empty() || ds.empty()) return false;
      std::int64_t n = std::stoll(ns, &used);
      if (used != ns.size()) return false;
      std::int64_t d = std::stoll(ds, &used);
      if (used != ds.size() || d == 0) return false;
      out = Rational(n, d);
      return true;
    } catch (const std::exception&) {
      return false;
    }
  }

private:
  std::int64_t num_, den_;

  void normalize() {
    if (den_ < 0) { num_ = -num_; den_ = -den_; }
    std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
    if (g > 1) { num_ /= g; den_ /= g; }
  }

  static Rational from_wide(__int128 n, __int128 d) {
    if (d < 0) { n = -n; d = -d; }
    __int128 an = n < 0 ? -n : n;
    // gcd on the wide values before narrowing
    __int128 a = an, b = d;
    while (b != 0) { __int128 t = a % b; a = b; b = t; }
    if (a > 1) { n /= a; d /= a; }
    if (n > INT64_MAX || n < INT64_MIN || d > INT64_MAX) throw RationalOverflow();
    Rational r;
    r.num_ = (std::int64_t)n;
    r.den_ = (std::int64_t)d;
    return r;
  }
};

}  // namespace osr
