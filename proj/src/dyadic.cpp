#include "lipx/dyadic.hpp"

#include <ostream>

#include "lipx/error.hpp"

namespace lipx {

BinWord BinWord::parse(std::string_view bits) {
  for (char c : bits) {
    if (c != '0' && c != '1') throw Error(Errc::parse, "not a binary word: '" + std::string(bits) + "'");
  }
  return BinWord(std::string(bits));
}

BinWord BinWord::fromIndex(unsigned length, std::uint64_t index) {
  if (length > 63) throw Error(Errc::range, "word length above 63 has no machine index");
  std::string s(length, '0');
  for (unsigned i = 0; i < length; ++i) {
    if ((index >> (length - 1 - i)) & 1U) s[i] = '1';
  }
  return BinWord(std::move(s));
}

BinWord BinWord::repeat(bool b, std::size_t count) { return BinWord(std::string(count, b ? '1' : '0')); }

std::uint64_t BinWord::index() const {
  if (bits_.size() > 63) throw Error(Errc::range, "word length above 63 has no machine index");
  std::uint64_t v = 0;
  for (char c : bits_) v = (v << 1) | static_cast<std::uint64_t>(c == '1');
  return v;
}

BinWord BinWord::prefix(std::size_t n) const {
  if (n > bits_.size()) throw Error(Errc::insufficient_prefix, "prefix longer than word");
  return BinWord(bits_.substr(0, n));
}

BinWord BinWord::child(bool b) const { return BinWord(bits_ + (b ? '1' : '0')); }

BinWord BinWord::sibling() const {
  if (bits_.empty()) throw Error(Errc::range, "the empty word has no sibling");
  std::string s = bits_;
  s.back() = s.back() == '0' ? '1' : '0';
  return BinWord(std::move(s));
}

BinWord BinWord::parent() const {
  if (bits_.empty()) throw Error(Errc::range, "the empty word has no parent");
  return BinWord(bits_.substr(0, bits_.size() - 1));
}

bool BinWord::isPrefixOf(const BinWord& other) const {
  return bits_.size() <= other.bits_.size() && other.bits_.compare(0, bits_.size(), bits_) == 0;
}

std::strong_ordering operator<=>(const BinWord& a, const BinWord& b) {
  if (a.size() != b.size()) return a.size() <=> b.size();
  return a.bits_.compare(b.bits_) <=> 0;
}

std::ostream& operator<<(std::ostream& os, const BinWord& w) { return os << w.str(); }

Dyadic::Dyadic(const Rat& v) : v_(v) {
  if (!v_.isDyadic()) throw Error(Errc::parameter, v.str() + " is not a dyadic rational");
}

Dyadic::Dyadic(long num, unsigned exponent) : v_(Rat(num) * Rat::pow2(-static_cast<long>(exponent))) {}

Dyadic::Dyadic(const mpz_class& num, unsigned long exponent)
    : v_(Rat(num) * Rat::pow2(-static_cast<long>(exponent))) {}

Dyadic Dyadic::fromWord(const BinWord& w) {
  mpz_class num = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    num <<= 1;
    if (w[i]) num += 1;
  }
  return Dyadic(num, w.size());
}

BinWord Dyadic::toWord(std::size_t n) const {
  if (v_.sign() < 0 || v_ >= Rat(1)) throw Error(Errc::range, v_.str() + " is outside [0,1)");
  if (exponent() > n) throw Error(Errc::depth, v_.str() + " needs more than " + std::to_string(n) + " bits");
  mpz_class scaled = (v_ * Rat::pow2(static_cast<long>(n))).num();
  std::string bits(n, '0');
  for (std::size_t i = 0; i < n; ++i) {
    if (mpz_tstbit(scaled.get_mpz_t(), n - 1 - i)) bits[i] = '1';
  }
  return BinWord::parse(bits);
}

std::ostream& operator<<(std::ostream& os, const Dyadic& d) { return os << d.value(); }

}  // namespace lipx
