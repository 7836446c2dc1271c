#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "lipx/dyadic.hpp"
#include "lipx/error.hpp"
#include "lipx/kernels.hpp"
#include "lipx/rat.hpp"

namespace lipx {

enum class PieceMode { step, linear };

const char* modeName(PieceMode m) noexcept;

/// Step or piecewise-linear function on [0,1] with dyadic breakpoints.
///
/// Breakpoints run strictly increasing from 0 to 1. In step mode there is one
/// value per segment and a breakpoint takes the value of the segment to its
/// right (x = 1 takes the last segment). In linear mode there is one value
/// per breakpoint and the function interpolates between them.
class PiecewiseFn {
 public:
  PiecewiseFn() : PiecewiseFn(constant(Rat(0))) {}

  static PiecewiseFn step(std::vector<Rat> breakpoints, std::vector<Rat> values);
  static PiecewiseFn linear(std::vector<Rat> breakpoints, std::vector<Rat> values);
  static PiecewiseFn constant(const Rat& c);
  /// x -> c * x
  static PiecewiseFn ramp(const Rat& c);
  /// Linear-mode function through (i / 2^depth, nodes[i]); nodes has 2^depth + 1 entries.
  static PiecewiseFn onUniformGrid(unsigned depth, std::vector<Rat> nodes);

  PieceMode mode() const noexcept { return mode_; }
  const std::vector<Rat>& breakpoints() const noexcept { return breaks_; }
  const std::vector<Rat>& values() const noexcept { return values_; }
  std::size_t segments() const noexcept { return breaks_.size() - 1; }

  /// Throws Errc::range outside [0,1].
  Rat operator()(const Rat& x) const;

  /// Segment index i with breaks[i] <= x < breaks[i+1] (last segment for x = 1).
  std::size_t segmentOf(const Rat& x) const;

  /// Slope of segment i (linear mode; 0 in step mode).
  Rat segmentSlope(std::size_t i) const;

  /// Pointwise sum and scalar multiple; both operands must share a mode.
  friend PiecewiseFn operator+(const PiecewiseFn& a, const PiecewiseFn& b);
  PiecewiseFn scaled(const Rat& c) const;

  /// Drops breakpoints that do not change the formula.
  PiecewiseFn simplified() const;

  friend bool operator==(const PiecewiseFn&, const PiecewiseFn&) = default;

 private:
  PiecewiseFn(PieceMode m, std::vector<Rat> b, std::vector<Rat> v)
      : mode_(m), breaks_(std::move(b)), values_(std::move(v)) {}
  void validate() const;

  PieceMode mode_ = PieceMode::step;
  std::vector<Rat> breaks_;
  std::vector<Rat> values_;
};

/// (f(y) - f(x)) / (y - x). Works for any callable Rat -> Rat.
template <class F>
Rat slope(const F& f, const Rat& x, const Rat& y) {
  if (x == y) throw Error(Errc::degenerate_pair, "slope at x = y = " + x.str());
  return (f(y) - f(x)) / (y - x);
}

/// x, every k / 2^depth strictly between x and y, then y.
std::vector<Rat> gridPoints(const Rat& x, const Rat& y, unsigned depth);

/// Variation sum over gridPoints(x, y, depth): sum |df| for p = 1, otherwise
/// sum |df|^p / |dt|^(p-1). Throws empty_interval for x >= y and parameter
/// for p < 1.
template <class F>
Rat gridVariation(const F& f, const Rat& x, const Rat& y, unsigned depth, const Rat& p) {
  if (!(x < y)) throw Error(Errc::empty_interval, "[" + x.str() + ", " + y.str() + "] is empty");
  if (p < Rat(1)) throw Error(Errc::parameter, "p = " + p.str() + " is below 1");
  const std::vector<Rat> t = gridPoints(x, y, depth);
  std::vector<Rat> v(t.size());
  kernels::forEachIndex(t.size(), [&](std::size_t i) { v[i] = f(t[i]); });
  return kernels::powerVariationSum(t, v, p);
}

/// Exact integral of f over [0, x].
Rat integratePiecewise(const PiecewiseFn& f, const Rat& x);

/// x -> integral of f over [0, x] for a step function f, as a linear-mode function.
PiecewiseFn antiderivative(const PiecewiseFn& stepFn);

/// Exact integral of |f|^p over [0,1] for a step function.
Rat integralAbsPow(const PiecewiseFn& stepFn, const Rat& p);

/// Exact V(f, [0,1]).
Rat totalVariation(const PiecewiseFn& f);

/// Exact V_p(f, [0,1]). For a step function with a jump and p > 1 the
/// p-variation is infinite and Errc::parameter is thrown.
Rat exactPVariation(const PiecewiseFn& f, const Rat& p);

struct PVariationNorm {
  Rat absAtZero;
  Rat pVariation;
  Rat p;
  /// |f(0)| + V_p^(1/p) when that root is rational.
  std::optional<Rat> norm;
};

PVariationNorm pVariationNorm(const PiecewiseFn& f, const Rat& p);

struct DerivBounds {
  unsigned fromDepth = 0;
  unsigned toDepth = 0;
  Rat minSlope;
  Rat maxSlope;
  unsigned minAt = 0;  // depth attaining minSlope (first one)
  unsigned maxAt = 0;
};

/// Extremes over n in [fromDepth, toDepth] of the slope of f across the
/// level-n dyadic interval containing the point with binary prefix z.
template <class F>
DerivBounds dyadicDerivBounds(const F& f, const BinWord& z, unsigned fromDepth, unsigned toDepth) {
  if (fromDepth > toDepth) throw Error(Errc::parameter, "fromDepth exceeds toDepth");
  if (toDepth > z.size()) {
    throw Error(Errc::insufficient_prefix, "depth " + std::to_string(toDepth) + " needs a prefix of that length, have " +
                                               std::to_string(z.size()));
  }
  DerivBounds out;
  out.fromDepth = fromDepth;
  out.toDepth = toDepth;
  Rat left;  // 0.(z|n), built incrementally
  for (unsigned n = 0; n <= toDepth; ++n) {
    if (n > 0 && z[n - 1]) left += Rat::pow2(-static_cast<long>(n));
    if (n < fromDepth) continue;
    const Rat s = slope(f, left, left + Rat::pow2(-static_cast<long>(n)));
    if (n == fromDepth || s < out.minSlope) out.minSlope = s, out.minAt = n;
    if (n == fromDepth || s > out.maxSlope) out.maxSlope = s, out.maxAt = n;
  }
  return out;
}

/// (i / 2^depth, f(i / 2^depth)) for i = 0 .. 2^depth.
std::vector<std::pair<Rat, Rat>> sampleGrid(const PiecewiseFn& f, unsigned depth);

}  // namespace lipx
