#include "lipx/rat.hpp"

#include <cctype>
#include <ostream>

#include "lipx/error.hpp"

namespace lipx {

namespace {

bool isDecimal(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

Rat::Rat(long num, long den) {
  if (den == 0) throw Error(Errc::parse, "zero denominator");
  q_ = mpq_class(num, den);
  q_.canonicalize();
}

Rat::Rat(const mpz_class& num, const mpz_class& den) {
  if (den == 0) throw Error(Errc::parse, "zero denominator");
  q_ = mpq_class(num, den);
  q_.canonicalize();
}

Rat::Rat(mpq_class q) : q_(std::move(q)) {
  if (q_.get_den() == 0) throw Error(Errc::parse, "zero denominator");
  q_.canonicalize();
}

Rat Rat::parse(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  const auto slash = body.find('/');
  std::string_view numText = body.substr(0, slash);
  std::string_view denText = slash == std::string_view::npos ? std::string_view("1") : body.substr(slash + 1);
  if (!isDecimal(numText) || !isDecimal(denText)) {
    throw Error(Errc::parse, "malformed rational '" + std::string(text) + "'");
  }
  mpz_class num(std::string(numText), 10);
  mpz_class den(std::string(denText), 10);
  if (den == 0) throw Error(Errc::parse, "zero denominator in '" + std::string(text) + "'");
  if (negative) num = -num;
  return Rat(num, den);
}

Rat Rat::timesPow2(long e) const {
  mpq_class r;
  if (e >= 0) mpq_mul_2exp(r.get_mpq_t(), q_.get_mpq_t(), static_cast<mp_bitcnt_t>(e));
  else mpq_div_2exp(r.get_mpq_t(), q_.get_mpq_t(), static_cast<mp_bitcnt_t>(-e));
  return Rat(std::move(r), Canonical{});
}

Rat Rat::pow2(long e) {
  mpz_class p = 1;
  const unsigned long m = e >= 0 ? static_cast<unsigned long>(e) : static_cast<unsigned long>(-e);
  mpz_mul_2exp(p.get_mpz_t(), p.get_mpz_t(), m);
  return e >= 0 ? Rat(p) : Rat(mpz_class(1), p);
}

bool Rat::isDyadic() const {
  const mpz_class& d = q_.get_den();
  return mpz_popcount(d.get_mpz_t()) == 1;
}

unsigned long Rat::dyadicExponent() const {
  if (!isDyadic()) throw Error(Errc::parameter, str() + " is not a dyadic rational");
  return mpz_scan1(q_.get_den().get_mpz_t(), 0);
}

mpz_class Rat::floor() const {
  mpz_class r;
  mpz_fdiv_q(r.get_mpz_t(), q_.get_num().get_mpz_t(), q_.get_den().get_mpz_t());
  return r;
}

mpz_class Rat::ceil() const {
  mpz_class r;
  mpz_cdiv_q(r.get_mpz_t(), q_.get_num().get_mpz_t(), q_.get_den().get_mpz_t());
  return r;
}

Rat& Rat::operator/=(const Rat& o) {
  if (o.isZero()) throw Error(Errc::parameter, "division by zero");
  q_ /= o.q_;
  return *this;
}

std::ostream& operator<<(std::ostream& os, const Rat& r) { return os << r.str(); }

Rat min(const Rat& a, const Rat& b) { return b < a ? b : a; }
Rat max(const Rat& a, const Rat& b) { return a < b ? b : a; }

Rat powInt(const Rat& base, unsigned long e) {
  mpz_class n, d;
  mpz_pow_ui(n.get_mpz_t(), base.mpq().get_num().get_mpz_t(), e);
  mpz_pow_ui(d.get_mpz_t(), base.mpq().get_den().get_mpz_t(), e);
  return Rat(n, d);
}

std::optional<Rat> exactPow(const Rat& base, const Rat& p) {
  if (p.sign() <= 0) return std::nullopt;
  const Rat b = base.abs();
  if (p.isInteger()) return powInt(b, p.num().get_ui());
  if (!p.den().fits_ulong_p() || !p.num().fits_ulong_p()) return std::nullopt;
  const unsigned long root = p.den().get_ui();
  mpz_class rn, rd;
  const bool exactNum = mpz_root(rn.get_mpz_t(), b.mpq().get_num().get_mpz_t(), root) != 0;
  const bool exactDen = mpz_root(rd.get_mpz_t(), b.mpq().get_den().get_mpz_t(), root) != 0;
  if (!exactNum || !exactDen) return std::nullopt;
  return powInt(Rat(rn, rd), p.num().get_ui());
}

Rat requireExactPow(const Rat& base, const Rat& p) {
  auto r = exactPow(base, p);
  if (!r) {
    throw Error(Errc::inexact_power, "|" + base.str() + "|^" + p.str() + " is not rational");
  }
  return *r;
}

}  // namespace lipx
