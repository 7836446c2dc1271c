#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>

#include "lipx/rat.hpp"

namespace lipx {

/// Finite word over {0,1}. The empty word is allowed.
class BinWord {
 public:
  BinWord() = default;

  /// Parses a string of '0'/'1' characters; anything else is Errc::parse.
  static BinWord parse(std::string_view bits);

  /// The word of length `length` whose bits spell `index` in binary, most
  /// significant bit first. Requires length <= 63 and index < 2^length.
  static BinWord fromIndex(unsigned length, std::uint64_t index);

  /// b repeated `count` times.
  static BinWord repeat(bool b, std::size_t count);

  std::size_t size() const noexcept { return bits_.size(); }
  bool empty() const noexcept { return bits_.empty(); }
  bool operator[](std::size_t i) const { return bits_[i] == '1'; }

  /// The word read as a binary integer (requires size() <= 63).
  std::uint64_t index() const;

  BinWord prefix(std::size_t n) const;
  BinWord child(bool b) const;
  BinWord sibling() const;  // flips the last bit; requires non-empty
  BinWord parent() const;   // drops the last bit; requires non-empty
  bool isPrefixOf(const BinWord& other) const;

  const std::string& str() const noexcept { return bits_; }

  friend bool operator==(const BinWord&, const BinWord&) = default;
  /// Shortlex order: shorter words first, then lexicographic.
  friend std::strong_ordering operator<=>(const BinWord& a, const BinWord& b);

 private:
  explicit BinWord(std::string bits) : bits_(std::move(bits)) {}
  std::string bits_;
};

std::ostream& operator<<(std::ostream& os, const BinWord& w);

/// Dyadic rational i / 2^k. Stored as an exact Rat.
class Dyadic {
 public:
  Dyadic() = default;
  /// Throws Errc::parameter unless the denominator is a power of two.
  explicit Dyadic(const Rat& v);
  Dyadic(long num, unsigned exponent);
  Dyadic(const mpz_class& num, unsigned long exponent);

  static Dyadic parse(std::string_view text) { return Dyadic(Rat::parse(text)); }

  /// 0.w, i.e. sum of w_i 2^-(i+1).
  static Dyadic fromWord(const BinWord& w);

  const Rat& value() const noexcept { return v_; }
  /// Least k with value * 2^k integral.
  unsigned long exponent() const { return v_.dyadicExponent(); }

  /// The length-n word w with 0.w = value. Requires 0 <= value < 1 and
  /// exponent() <= n; Errc::depth otherwise.
  BinWord toWord(std::size_t n) const;

  std::string str() const { return v_.str(); }

  friend bool operator==(const Dyadic&, const Dyadic&) = default;
  friend std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b) { return a.v_ <=> b.v_; }

 private:
  Rat v_;
};

std::ostream& operator<<(std::ostream& os, const Dyadic& d);

}  // namespace lipx

template <>
struct std::hash<lipx::BinWord> {
  std::size_t operator()(const lipx::BinWord& w) const noexcept {
    return std::hash<std::string>{}(w.str());
  }
};
