#include "lipx/piecewise.hpp"

#include <algorithm>

namespace lipx {

const char* modeName(PieceMode m) noexcept { return m == PieceMode::step ? "step" : "linear"; }

PiecewiseFn PiecewiseFn::step(std::vector<Rat> breakpoints, std::vector<Rat> values) {
  PiecewiseFn f(PieceMode::step, std::move(breakpoints), std::move(values));
  f.validate();
  return f;
}

PiecewiseFn PiecewiseFn::linear(std::vector<Rat> breakpoints, std::vector<Rat> values) {
  PiecewiseFn f(PieceMode::linear, std::move(breakpoints), std::move(values));
  f.validate();
  return f;
}

PiecewiseFn PiecewiseFn::constant(const Rat& c) { return PiecewiseFn(PieceMode::step, {Rat(0), Rat(1)}, {c}); }

PiecewiseFn PiecewiseFn::ramp(const Rat& c) { return PiecewiseFn(PieceMode::linear, {Rat(0), Rat(1)}, {Rat(0), c}); }

PiecewiseFn PiecewiseFn::onUniformGrid(unsigned depth, std::vector<Rat> nodes) {
  const std::size_t n = std::size_t{1} << depth;
  if (nodes.size() != n + 1) throw Error(Errc::parameter, "uniform grid needs 2^depth + 1 node values");
  std::vector<Rat> b(n + 1);
  const Rat h = Rat::pow2(-static_cast<long>(depth));
  kernels::forEachIndex(n + 1, [&](std::size_t i) { b[i] = Rat(static_cast<long>(i)) * h; });
  return PiecewiseFn(PieceMode::linear, std::move(b), std::move(nodes));
}

void PiecewiseFn::validate() const {
  if (breaks_.size() < 2) throw Error(Errc::parameter, "need at least the breakpoints 0 and 1");
  if (breaks_.front() != Rat(0) || breaks_.back() != Rat(1)) {
    throw Error(Errc::parameter, "breakpoints must start at 0 and end at 1");
  }
  for (std::size_t i = 0; i < breaks_.size(); ++i) {
    if (!breaks_[i].isDyadic()) throw Error(Errc::parameter, "breakpoint " + breaks_[i].str() + " is not dyadic");
    if (i > 0 && !(breaks_[i - 1] < breaks_[i])) throw Error(Errc::parameter, "breakpoints not strictly increasing");
  }
  const std::size_t want = mode_ == PieceMode::step ? breaks_.size() - 1 : breaks_.size();
  if (values_.size() != want) {
    throw Error(Errc::parameter, std::string(modeName(mode_)) + " function needs " + std::to_string(want) +
                                     " values, got " + std::to_string(values_.size()));
  }
}

std::size_t PiecewiseFn::segmentOf(const Rat& x) const {
  if (x < Rat(0) || x > Rat(1)) throw Error(Errc::range, x.str() + " is outside [0,1]");
  const auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
  const auto i = static_cast<std::size_t>(it - breaks_.begin());
  return std::min(i, breaks_.size() - 1) - 1;
}

Rat PiecewiseFn::operator()(const Rat& x) const {
  const std::size_t i = segmentOf(x);
  if (mode_ == PieceMode::step) return values_[i];
  if (x == breaks_[i]) return values_[i];
  return values_[i] + segmentSlope(i) * (x - breaks_[i]);
}

Rat PiecewiseFn::segmentSlope(std::size_t i) const {
  if (mode_ == PieceMode::step) return Rat(0);
  return (values_[i + 1] - values_[i]) / (breaks_[i + 1] - breaks_[i]);
}

PiecewiseFn operator+(const PiecewiseFn& a, const PiecewiseFn& b) {
  if (a.mode_ != b.mode_) throw Error(Errc::parameter, "cannot add step and linear functions");
  std::vector<Rat> merged;
  merged.reserve(a.breaks_.size() + b.breaks_.size());
  std::set_union(a.breaks_.begin(), a.breaks_.end(), b.breaks_.begin(), b.breaks_.end(), std::back_inserter(merged));
  const std::size_t count = a.mode_ == PieceMode::step ? merged.size() - 1 : merged.size();
  std::vector<Rat> v(count);
  kernels::forEachIndex(count, [&](std::size_t i) { v[i] = a(merged[i]) + b(merged[i]); });
  return PiecewiseFn(a.mode_, std::move(merged), std::move(v));
}

PiecewiseFn PiecewiseFn::scaled(const Rat& c) const {
  std::vector<Rat> v(values_);
  for (Rat& x : v) x *= c;
  return PiecewiseFn(mode_, breaks_, std::move(v));
}

PiecewiseFn PiecewiseFn::simplified() const {
  std::vector<Rat> b{breaks_.front()};
  std::vector<Rat> v{values_.front()};
  if (mode_ == PieceMode::step) {
    for (std::size_t i = 1; i < values_.size(); ++i) {
      if (values_[i] != v.back()) b.push_back(breaks_[i]), v.push_back(values_[i]);
    }
    b.push_back(breaks_.back());
    return PiecewiseFn(mode_, std::move(b), std::move(v));
  }
  for (std::size_t i = 1; i + 1 < breaks_.size(); ++i) {
    if (segmentSlope(i - 1) != segmentSlope(i)) b.push_back(breaks_[i]), v.push_back(values_[i]);
  }
  b.push_back(breaks_.back());
  v.push_back(values_.back());
  return PiecewiseFn(mode_, std::move(b), std::move(v));
}

std::vector<Rat> gridPoints(const Rat& x, const Rat& y, unsigned depth) {
  const Rat scale = Rat::pow2(static_cast<long>(depth));
  const Rat h = Rat::pow2(-static_cast<long>(depth));
  // grid indices k with x < k h < y
  mpz_class lo = (x * scale).floor() + 1;
  mpz_class hi = (y * scale).ceil() - 1;
  std::vector<Rat> t{x};
  if (lo <= hi) {
    const mpz_class count = hi - lo + 1;
    if (!count.fits_ulong_p() || count.get_ui() > (1ul << 26)) throw Error(Errc::parameter, "grid too fine");
    const std::size_t n = count.get_ui();
    t.resize(n + 1);
    kernels::forEachIndex(n, [&](std::size_t i) { t[i + 1] = Rat(mpz_class(lo + static_cast<unsigned long>(i))) * h; });
  }
  t.push_back(y);
  return t;
}

Rat integratePiecewise(const PiecewiseFn& f, const Rat& x) {
  const std::size_t last = f.segmentOf(x);
  const auto& b = f.breakpoints();
  const auto& v = f.values();
  Rat s;
  for (std::size_t i = 0; i < last; ++i) {
    const Rat len = b[i + 1] - b[i];
    s += f.mode() == PieceMode::step ? v[i] * len : (v[i] + v[i + 1]) * len / Rat(2);
  }
  const Rat len = x - b[last];
  s += f.mode() == PieceMode::step ? v[last] * len : (v[last] + f(x)) * len / Rat(2);
  return s;
}

PiecewiseFn antiderivative(const PiecewiseFn& stepFn) {
  if (stepFn.mode() != PieceMode::step) {
    throw Error(Errc::parameter, "antiderivative of a linear function is not piecewise linear");
  }
  const auto& b = stepFn.breakpoints();
  std::vector<Rat> nodes(b.size());
  for (std::size_t i = 0; i + 1 < b.size(); ++i) nodes[i + 1] = nodes[i] + stepFn.values()[i] * (b[i + 1] - b[i]);
  return PiecewiseFn::linear(b, std::move(nodes));
}

Rat integralAbsPow(const PiecewiseFn& stepFn, const Rat& p) {
  if (stepFn.mode() != PieceMode::step) throw Error(Errc::parameter, "integralAbsPow needs a step function");
  const auto& b = stepFn.breakpoints();
  Rat s;
  for (std::size_t i = 0; i + 1 < b.size(); ++i) {
    const Rat& v = stepFn.values()[i];
    if (!v.isZero()) s += requireExactPow(v, p) * (b[i + 1] - b[i]);
  }
  return s;
}

Rat totalVariation(const PiecewiseFn& f) {
  const auto& v = f.values();
  Rat s;
  for (std::size_t i = 0; i + 1 < v.size(); ++i) s += (v[i + 1] - v[i]).abs();
  return s;
}

Rat exactPVariation(const PiecewiseFn& f, const Rat& p) {
  if (p < Rat(1)) throw Error(Errc::parameter, "p = " + p.str() + " is below 1");
  if (p == Rat(1)) return totalVariation(f);
  if (f.mode() == PieceMode::step) {
    if (!totalVariation(f).isZero()) throw Error(Errc::parameter, "p-variation of a jump is infinite for p > 1");
    return Rat(0);
  }
  // Refining a partition cannot decrease sum |slope|^p |dt| (convexity), so
  // the supremum is attained on the breakpoints.
  return kernels::powerVariationSum(f.breakpoints(), f.values(), p);
}

PVariationNorm pVariationNorm(const PiecewiseFn& f, const Rat& p) {
  if (p < Rat(1)) throw Error(Errc::parameter, "p = " + p.str() + " is below 1");
  PVariationNorm out;
  out.absAtZero = f(Rat(0)).abs();
  out.pVariation = exactPVariation(f, p);
  out.p = p;
  if (out.pVariation.isZero()) {
    out.norm = out.absAtZero;
  } else if (auto root = exactPow(out.pVariation, Rat(1) / p)) {
    out.norm = out.absAtZero + *root;
  }
  return out;
}

std::vector<std::pair<Rat, Rat>> sampleGrid(const PiecewiseFn& f, unsigned depth) {
  const std::size_t n = (std::size_t{1} << depth) + 1;
  const Rat h = Rat::pow2(-static_cast<long>(depth));
  std::vector<std::pair<Rat, Rat>> out(n);
  kernels::forEachIndex(n, [&](std::size_t i) {
    const Rat x = Rat(static_cast<long>(i)) * h;
    out[i] = {x, f(x)};
  });
  return out;
}

}  // namespace lipx
