#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lipx/check.hpp"
#include "lipx/cubes.hpp"
#include "lipx/piecewise.hpp"

namespace lipx {

/// Staged enumeration of an effectively open set: a nondecreasing list of
/// cube sets. Stages past the last repeat it, so the last stage is the limit.
class Sigma01Enum {
 public:
  /// Errc::staging unless each stage contains the previous one.
  explicit Sigma01Enum(std::vector<DyadicCubeSet> cumulative);
  /// Stage t adds newCubes[t].
  static Sigma01Enum fromIncrements(unsigned dim, const std::vector<std::vector<DyadicCube>>& newCubes);
  static Sigma01Enum constant(const DyadicCubeSet& s) { return Sigma01Enum({s}); }

  unsigned dim() const noexcept { return stages_.front().dim(); }
  std::size_t lastStage() const noexcept { return stages_.size() - 1; }
  const DyadicCubeSet& at(std::size_t t) const { return stages_[std::min(t, lastStage())]; }
  const DyadicCubeSet& limit() const noexcept { return stages_.back(); }
  Rat limitMeasure() const { return limit().measure(); }

  /// Least t with lambda(V \ V_t) < eps. Errc::parameter for eps <= 0.
  std::size_t modulus(const Rat& eps) const;

 private:
  std::vector<DyadicCubeSet> stages_;
};

/// Uniform family m -> V_m with lambda V_m <= 2^-m. Members are generated
/// on demand and cached; copies share the cache.
class SchnorrTest {
 public:
  using Generator = std::function<Sigma01Enum(unsigned m)>;

  SchnorrTest(unsigned dim, Generator gen, std::string description);

  unsigned dim() const noexcept;
  const std::string& description() const noexcept;
  /// Errc::dimension if the generator returns the wrong dimension.
  const Sigma01Enum& member(unsigned m) const;
  std::size_t modulus(unsigned m, const Rat& eps) const { return member(m).modulus(eps); }

 private:
  struct Impl;
  std::shared_ptr<Impl> impl_;
};

/// V_m is the level ceil(m/n) cube containing z, fully present at stage 0.
SchnorrTest pointTest(const CubePoint& z);
/// Same limit sets, but V_m shows up one child cube per stage (2^n stages).
SchnorrTest stagedPointTest(const CubePoint& z);

/// Cube enumerated into G_m at `stage`. For m >= 1, `parent` indexes the
/// cube of G_{m-1} whose share of V_r produced it. `r` is the member of V
/// this cube feeds into G_{m+1}.
struct GCube {
  DyadicCube cube;
  std::size_t stage = 0;
  unsigned r = 0;
  std::optional<std::size_t> parent;
};

struct GLevel {
  std::vector<GCube> cubes;
  std::vector<DyadicCubeSet> stages;  // cumulative G_{m,t} for t = 0..lastStage
  const DyadicCubeSet& at(std::size_t t) const { return stages[std::min(t, stages.size() - 1)]; }
  const DyadicCubeSet& limit() const { return stages.back(); }
};

struct RefinedTest {
  SchnorrTest source;
  std::vector<GLevel> levels;  // G_0 .. G_mMax
  std::size_t lastStage = 0;   // stages 0..lastStage were simulated
  bool partial = false;        // some member of V was still growing after the budget
  unsigned dim() const noexcept { return source.dim(); }
};

/// Least r >= stage with 2^-r <= 2^-(m+1) * lambda(C).
unsigned refinementIndex(unsigned m, const DyadicCube& c, std::size_t stage);

/// Builds G_0..G_mMax over stages 0..stageBudget-1.
RefinedTest refineTest(const SchnorrTest& v, unsigned mMax, std::size_t stageBudget);

struct GModulus {
  std::size_t t = 0;
  std::size_t s = 0;          // stage used for G_{m-1}
  std::size_t cubesBefore = 0;  // N
  Rat perCubeEps;             // eps / (2N), 0 when unused
  Rat residual;               // lambda(G_m,last \ G_m,t)
  Rat bound;                  // 2 eps
  bool certified = false;     // residual < bound
};

/// Stage t for G_m with lambda(G_m \ G_{m,t}) < 2 eps, following the
/// measure-computability argument: s for G_{m-1} at eps/2, then per-cube
/// moduli at eps/(2N). Errc::contract if G_m was not built.
GModulus modulusForG(const RefinedTest& g, unsigned m, const Rat& eps);

/// sum_{i<=m} (-1)^i 1_{G_i}(x) on the limit sets. Errc::boundary on faces.
Rat gPartialEval(const RefinedTest& g, const CubePoint& x, unsigned m);
CubeStepFn gPartialFn(const RefinedTest& g, unsigned m);
/// sum_{i=r}^{m} (-1)^i 1_{G_i}.
CubeStepFn tailFn(const RefinedTest& g, unsigned r, unsigned m);

/// (lambda C)^-1 sum_{i<=m} (-1)^i lambda(G_i cap C). Errc::depth if m > mMax.
Rat cubeAverage(const RefinedTest& g, const DyadicCube& c, unsigned m);

/// Cube of G_m (at its limit) containing z, if any. Errc::ambiguity when
/// z lies on the boundary of two candidates.
std::optional<GCube> cubeContaining(const RefinedTest& g, unsigned m, const CubePoint& z);

/// Measure bound at every stage, nested provenance cubes around z, the
/// alternating cube-average bounds and the truncation-tail L1 bounds.
std::vector<Check> verifyRefined(const RefinedTest& g, const CubePoint& z);

/// Continuous approximant h = max(0, 1 - N d(x, V_t)) of 1_V with a
/// certificate for ||1_V - h||_p < eps.
struct CharApprox {
  Rat eps;
  Rat p;
  std::size_t stage = 0;
  DyadicCubeSet core;           // V_t
  unsigned gridLevel = 0;       // N = 2^gridLevel
  Rat enumerationGap;           // lambda(V \ V_t), certified < (eps/2)^p
  Rat rampBound;                // bound on the integral of |1_{V_t} - h|^p, certified < (eps/2)^p
  bool rampExact = false;       // rampBound is the exact integral
  bool certified = false;

  Rat n() const { return Rat::pow2(static_cast<long>(gridLevel)); }
  /// Squared Euclidean distance from x to V_t.
  Rat squaredDistance(const std::vector<Rat>& x) const;
  /// h(x); Errc::inexact_power when the distance is irrational.
  Rat operator()(const std::vector<Rat>& x) const;
};

/// Errc::parameter unless eps > 0 and p >= 1.
CharApprox charApprox(const Sigma01Enum& v, const Rat& eps, const Rat& p);

/// x < y^p for x >= 0, y > 0 and rational p, decided exactly.
bool lessThanPow(const Rat& x, const Rat& y, const Rat& p);

struct LpNorm {
  Rat p;
  Rat powerIntegral;       // integral of |f|^p
  std::optional<Rat> norm; // its p-th root when rational
};

/// Errc::parameter for p < 1; Errc::unsupported_class for linear pieces.
LpNorm lpNorm(const PiecewiseFn& f, const Rat& p);
LpNorm lpNorm(const CubeStepFn& f, const Rat& p);

/// Bounded L1-to-Lp step for integer p: if |g|,|h| <= bound and
/// ||g-h||_1 < (2 bound)^(1-p) eps^p then ||g-h||_p^p < eps^p. Every link
/// of the chain is evaluated exactly.
std::vector<Check> fact26Check(const CubeStepFn& g, const CubeStepFn& h, const Rat& bound, const Rat& eps,
                               unsigned p);

}  // namespace lipx
