#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "lipx/check.hpp"
#include "lipx/interval_re.hpp"
#include "lipx/martingale.hpp"
#include "lipx/piecewise.hpp"

namespace lipx {

/// Zigzag of slope +-1 on [p, q] with (q - p) 2^k teeth, zero elsewhere.
struct ZigzagSpec {
  Rat p;
  Rat q;
  unsigned k = 0;
};

/// Errc::spec unless p <= q are dyadics in [0,1] and k exceeds their common
/// binary exponent.
void validate(const ZigzagSpec& z);

Rat zigzagEval(const ZigzagSpec& z, const Rat& x);
PiecewiseFn zigzagFn(const ZigzagSpec& z);

/// g = sum over i of W(a[i-1], a[i]; i + 1) with a[-1] = 0. The list must
/// be nondecreasing in [0,1] and a[i] must have binary exponent <= i;
/// Errc::schedule otherwise.
PiecewiseFn fact31Build(const std::vector<Rat>& alphas);

/// Per-parent record of which update rule produced its two children.
struct NodeTrace {
  std::uint8_t a = 0;         // child with the smaller stage value (ties: 0)
  std::uint8_t negative = 0;  // parent value < 0
  std::uint8_t locked = 0;    // parent value was +-M_s(parent)
};

struct StageSchedule {
  /// levels[s] is the level at which stage s takes over (levels[0] = 0).
  /// Stage s builds levels levels[s]+1 .. levels[s+1].
  std::vector<unsigned> levels;
  /// Gated mode only: k[s] and the minimum switch level gate[s] for stage s.
  std::vector<unsigned> k;
  std::vector<unsigned> gate;
};

struct Lemma33Result {
  SignedMartingaleTable table;
  unsigned builtDepth = 0;
  StageSchedule schedule;
  std::vector<std::size_t> stageOfLevel;  // stage used to build each level (entry 0 unused)
  /// boundaryGap[s] = max over |sigma| = levels[s] of M_s(sigma) - V_{L,levels[s+1]}(sigma).
  std::vector<Rat> boundaryGap;
  std::vector<NodeTrace> trace;  // indexed like TreeTable, parents only
  bool capExceeded = false;
};

/// Signed martingale L with L(empty) = 0 whose level variations converge to
/// the staged martingale. Levels 1..targetDepth are built; the switch from
/// stage s to s+1 happens at the first level where every level-levels[s]
/// word is within 2^-s of M_s, and no earlier than gate[s+1] when gates are
/// given. Stages past the last repeat it. Without gates, if no switch level
/// is found at or below levelCap the build stops early with capExceeded.
Lemma33Result lemma33Build(const StagedMartingale& sm, unsigned targetDepth, unsigned levelCap,
                           const std::vector<unsigned>& gates = {});

/// Fairness, |L| <= active M_s, sign locking and the boundary gaps.
std::vector<Check> verifyLemma33(const StagedMartingale& sm, const Lemma33Result& r);

struct Thm34Result {
  Lemma33Result lemma;
  StagedMartingale staged;
  Rat lipschitz;
  PiecewiseFn g;  // linear through g(i / 2^depth)
};

/// Errc::contract if the oracle declares no Lipschitz bound.
Thm34Result thm34Build(const IntervalREOracle& f, unsigned depth, std::size_t stages, unsigned levelCap);

/// Dyadic Lipschitz inequality and variation versus the final-stage f.
std::vector<Check> verifyThm34(const Thm34Result& r);

/// Least level k at which every level-k cylinder has M-measure <= 2^-s;
/// nullopt if none at or below cap.
std::optional<unsigned> atomLevel(const MartingaleTable& m, std::size_t s, unsigned cap);

struct RuteSchedule {
  StagedMartingale staged;  // input with zero stages prepended
  std::size_t zerosPrepended = 0;
  std::vector<unsigned> k;     // k[s] for s = 0 .. stageCount
  std::vector<unsigned> gate;  // gate[s] = max(k[s+1], gate[s-1]) for s < stageCount
};

/// Errc::non_atomic_witness_missing if some k[s] is not found within depthCap.
RuteSchedule ruteSchedule(const StagedMartingale& sm, unsigned depthCap);

struct RuteResult {
  RuteSchedule schedule;
  Lemma33Result lemma;
  PiecewiseFn g;
};

RuteResult ruteBuild(const StagedMartingale& sm, unsigned targetDepth, unsigned depthCap);

/// Band bound 2^-|sigma| |L(sigma)| <= 2^-(s+1) and the dyadic enclosure
/// |g(a) - g(0.sigma)| <= 2^-s for every a in the level-levels[s] interval of sigma.
std::vector<Check> verifyRute(const RuteResult& r);

}  // namespace lipx
