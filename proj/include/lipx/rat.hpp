#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace lipx {

/// Exact rational number in lowest terms with a positive denominator.
///
/// Thin value wrapper over GMP's mpq_class. Every constructor canonicalizes,
/// so two equal values always have identical numerator and denominator.
class Rat {
 public:
  Rat() = default;
  Rat(long v) : q_(v) {}  // NOLINT(google-explicit-constructor)
  Rat(long num, long den);
  Rat(const mpz_class& num, const mpz_class& den);
  explicit Rat(const mpz_class& v) : q_(v) {}
  explicit Rat(mpq_class q);

  /// Accepts "p" or "p/q" with optional leading '-'; rejects q = 0.
  static Rat parse(std::string_view text);

  /// 2^e for any integer e.
  static Rat pow2(long e);

  const mpq_class& mpq() const noexcept { return q_; }
  mpz_class num() const { return q_.get_num(); }
  mpz_class den() const { return q_.get_den(); }

  int sign() const noexcept { return sgn(q_); }
  bool isZero() const noexcept { return sign() == 0; }
  bool isInteger() const { return q_.get_den() == 1; }

  /// True when the denominator is a power of two.
  bool isDyadic() const;

  /// log2 of the denominator; throws Errc::parameter for non-dyadic values.
  unsigned long dyadicExponent() const;

  mpz_class floor() const;
  mpz_class ceil() const;

  /// this * 2^e, without building 2^e.
  Rat timesPow2(long e) const;

  Rat abs() const { return Rat(mpq_class(::abs(q_)), Canonical{}); }

  /// Canonical "p/q" text; integers print without the denominator.
  std::string str() const { return q_.get_str(); }

  Rat operator-() const { return Rat(mpq_class(-q_), Canonical{}); }
  Rat& operator+=(const Rat& o) { q_ += o.q_; return *this; }
  Rat& operator-=(const Rat& o) { q_ -= o.q_; return *this; }
  Rat& operator*=(const Rat& o) { q_ *= o.q_; return *this; }
  Rat& operator/=(const Rat& o);

  friend Rat operator+(Rat a, const Rat& b) { return a += b; }
  friend Rat operator-(Rat a, const Rat& b) { return a -= b; }
  friend Rat operator*(Rat a, const Rat& b) { return a *= b; }
  friend Rat operator/(Rat a, const Rat& b) { return a /= b; }

  friend bool operator==(const Rat& a, const Rat& b) { return cmp(a.q_, b.q_) == 0; }
  friend std::strong_ordering operator<=>(const Rat& a, const Rat& b) {
    return cmp(a.q_, b.q_) <=> 0;
  }

 private:
  struct Canonical {};
  Rat(mpq_class q, Canonical) : q_(std::move(q)) {}

  mpq_class q_;
};

std::ostream& operator<<(std::ostream& os, const Rat& r);

Rat min(const Rat& a, const Rat& b);
Rat max(const Rat& a, const Rat& b);

/// base^e for a nonnegative integer exponent.
Rat powInt(const Rat& base, unsigned long e);

/// |base|^p when the result is rational (p rational, p > 0); nullopt otherwise.
std::optional<Rat> exactPow(const Rat& base, const Rat& p);

/// Like exactPow but throws Errc::inexact_power.
Rat requireExactPow(const Rat& base, const Rat& p);

}  // namespace lipx
