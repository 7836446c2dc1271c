#pragma once

#include <algorithm>
#include <span>
#include <utility>
#include <vector>

#include "lipx/dyadic.hpp"
#include "lipx/piecewise.hpp"
#include "lipx/rat.hpp"

namespace lipx {

/// Deepest table the library will allocate (2^25 - 1 entries).
inline constexpr unsigned kMaxTableDepth = 24;

/// Rational values on every word of length <= depth, stored level by level.
/// Word w sits at index 2^|w| - 1 + w.index().
class TreeTable {
 public:
  TreeTable() : TreeTable(0) {}
  explicit TreeTable(unsigned depth, const Rat& fill = Rat(0));

  /// Depth is the longest word given. Errc::incomplete_table if a word of
  /// length <= depth is missing, Errc::parse on duplicates.
  static TreeTable fromEntries(const std::vector<std::pair<BinWord, Rat>>& entries);

  unsigned depth() const noexcept { return depth_; }
  std::size_t size() const noexcept { return values_.size(); }

  static std::size_t offset(unsigned level) { return (std::size_t{1} << level) - 1; }

  const Rat& at(const BinWord& w) const;
  Rat& at(const BinWord& w);
  const Rat& at(unsigned level, std::size_t i) const { return values_[offset(level) + i]; }
  Rat& at(unsigned level, std::size_t i) { return values_[offset(level) + i]; }

  std::span<const Rat> level(unsigned l) const;
  std::span<Rat> level(unsigned l);

  /// The same values restricted to words of length <= depth.
  TreeTable truncated(unsigned depth) const;

  friend bool operator==(const TreeTable&, const TreeTable&) = default;

 private:
  std::size_t indexOf(const BinWord& w) const;

  unsigned depth_ = 0;
  std::vector<Rat> values_;
};

struct FairnessViolation {
  BinWord word;
  Rat residual;  // T(w0) + T(w1) - 2 T(w)
};

/// All words w with |w| < depth where the fairness identity fails.
std::vector<FairnessViolation> checkFairness(const TreeTable& t);

/// Fair table with values of either sign.
class SignedMartingaleTable {
 public:
  SignedMartingaleTable() = default;
  /// Errc::unfair unless the table is fair.
  explicit SignedMartingaleTable(TreeTable t);

  unsigned depth() const noexcept { return t_.depth(); }
  const Rat& operator()(const BinWord& w) const { return t_.at(w); }
  const Rat& at(unsigned level, std::size_t i) const { return t_.at(level, i); }
  std::span<const Rat> level(unsigned l) const { return t_.level(l); }
  const TreeTable& table() const noexcept { return t_; }

  friend bool operator==(const SignedMartingaleTable&, const SignedMartingaleTable&) = default;

 protected:
  struct Trusted {};
  SignedMartingaleTable(TreeTable t, Trusted) : t_(std::move(t)) {}
  TreeTable t_;
};

/// Fair table with nonnegative values.
class MartingaleTable : public SignedMartingaleTable {
 public:
  MartingaleTable() = default;
  /// Errc::unfair or Errc::negative_value.
  explicit MartingaleTable(TreeTable t);

  /// M == c on every word to the given depth.
  static MartingaleTable constant(unsigned depth, const Rat& c);
};

std::vector<FairnessViolation> checkFairness(const SignedMartingaleTable& m);

/// M(sigma) 2^-|sigma|.
Rat measureOfWord(const SignedMartingaleTable& m, const BinWord& sigma);

/// mu_M [0, x) for a dyadic x whose exponent is at most the table depth.
Rat cdfAtDyadic(const SignedMartingaleTable& m, const Rat& x);

/// cdf of the table extended below its depth by never betting, so the
/// function is linear across each deepest-level interval. Defined at every
/// rational in [0,1].
Rat cdfNoBet(const SignedMartingaleTable& m, const Rat& x);

/// The same function as a linear-mode PiecewiseFn on the depth grid.
PiecewiseFn cdfAsPiecewise(const SignedMartingaleTable& m);

/// Callable x -> cdfNoBet(m, x), for slope and derivative-bound helpers.
struct CdfFn {
  const SignedMartingaleTable* table;
  Rat operator()(const Rat& x) const { return cdfNoBet(*table, x); }
};

struct BoundedMartingaleBounds {
  Rat c;
  Rat d;
};

struct Enclosure {
  Rat lo;
  Rat hi;
  bool contains(const Rat& v) const { return lo <= v && v <= hi; }
};

/// Errc::invalid_bounds unless c <= M(sigma) <= d on the whole table.
void requireBounds(const MartingaleTable& m, const BoundedMartingaleBounds& b);

/// Enclosure of cdf(M)(y) - cdf(M)(x) valid for every martingale that agrees
/// with the table to its depth and stays in [c, d] below it.
Enclosure cdfBounds(const MartingaleTable& m, const BoundedMartingaleBounds& b, const Rat& x, const Rat& y);

/// 2^-(b - |sigma|) * sum of |L(sigma eta)| over |eta| = b - |sigma|.
Rat levelVariation(const SignedMartingaleTable& l, const BinWord& sigma, unsigned b);

/// levelVariation for every word of length a at once, in index order.
std::vector<Rat> levelVariationRow(const SignedMartingaleTable& l, unsigned a, unsigned b);

/// levelVariation at the deepest level of the table.
Rat variationLowerBound(const SignedMartingaleTable& l, const BinWord& sigma);

/// Monotone family M_0 <= M_1 <= ... of same-depth martingale tables.
class StagedMartingale {
 public:
  StagedMartingale() = default;
  /// Errc::staging on depth mismatch, non-monotone stages or no stages.
  explicit StagedMartingale(std::vector<MartingaleTable> stages);

  std::size_t stageCount() const noexcept { return stages_.size(); }
  unsigned depth() const { return stages_.front().depth(); }

  /// Stages past the last one repeat it.
  const MartingaleTable& stage(std::size_t s) const { return stages_[std::min(s, stages_.size() - 1)]; }
  const std::vector<MartingaleTable>& stages() const noexcept { return stages_; }

  /// Errc::staging under the same rules as the constructor.
  void append(MartingaleTable next);

  /// With `zeros` extra all-zero stages in front (renumbers the rest).
  StagedMartingale withLeadingZeros(std::size_t zeros) const;

 private:
  std::vector<MartingaleTable> stages_;
};

/// The best lower approximation available: the last stage's value.
Rat supStages(const StagedMartingale& sm, const BinWord& sigma);

}  // namespace lipx
