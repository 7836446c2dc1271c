#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lipx/dyadic.hpp"
#include "lipx/martingale.hpp"
#include "lipx/rat.hpp"

namespace lipx {

/// Finite prefix-free machine: program word -> dyadic output in [0,1).
class PrefixFreeMachine {
 public:
  PrefixFreeMachine() = default;
  /// Errc::machine if some key is a proper prefix of another or an output
  /// is not a dyadic rational in [0,1).
  explicit PrefixFreeMachine(std::map<BinWord, Rat> table);

  const std::map<BinWord, Rat>& table() const noexcept { return table_; }

 private:
  std::map<BinWord, Rat> table_;
};

/// Measure of the programs whose output is strictly below x.
Rat fsEval(const PrefixFreeMachine& s, const Rat& x);

/// Stage-indexed lower approximations to f(q) - f(p) on dyadic pairs p <= q.
class IntervalREOracle {
 public:
  using Approx = std::function<Rat(const Rat& p, const Rat& q, std::size_t stage)>;

  IntervalREOracle(Approx approx, std::optional<Rat> lipschitz, std::string description);

  /// Errc::oracle unless 0 <= p <= q <= 1.
  Rat approx(const Rat& p, const Rat& q, std::size_t stage) const;
  const std::optional<Rat>& lipschitz() const noexcept { return lipschitz_; }
  const std::string& description() const noexcept { return description_; }

  /// f(x) = c x, exact at every stage.
  static IntervalREOracle linear(const Rat& c);
  static IntervalREOracle zero();

  /// Explicit increments: stageIncrements[s][i] is the stage-s increment of
  /// f over the i-th level-`level` interval. Stages past the last repeat it.
  static IntervalREOracle fromIncrements(unsigned level, std::vector<std::vector<Rat>> stageIncrements,
                                         std::optional<Rat> lipschitz);

  /// approx(p, q, s) = cdf(M_s)(q) - cdf(M_s)(p) for a staged martingale.
  static IntervalREOracle fromStaged(StagedMartingale sm, std::optional<Rat> lipschitz);

 private:
  Approx approx_;
  std::optional<Rat> lipschitz_;
  std::string description_;
};

/// Single-stage exact oracle for f_S.
IntervalREOracle oracleFromMachine(const PrefixFreeMachine& s);

/// M_s(sigma) = 2^|sigma| approx(0.sigma, 0.sigma + 2^-|sigma|, s) for
/// |sigma| <= depth and s < stages. Errc::non_additive_oracle reports the
/// worst additivity residual, Errc::oracle a negative increment or a breach
/// of the declared Lipschitz bound, Errc::staging a decrease across stages.
StagedMartingale oracleToStaged(const IntervalREOracle& f, unsigned depth, std::size_t stages);

}  // namespace lipx
