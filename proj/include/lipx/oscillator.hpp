#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "lipx/check.hpp"
#include "lipx/martingale.hpp"

namespace lipx {

/// Computable betting strategy: the two child capitals from the word and
/// the current capital. Children always sum to twice the capital.
class Strategy {
 public:
  enum class Kind { constant, pattern };

  /// "constant", "double-on-0", "double-on-1" or "pattern:<bits>" (all-in
  /// on bit i mod |bits| at depth i). Errc::parse otherwise.
  static Strategy parse(const std::string& name, const Rat& initial = Rat(1));
  static Strategy constant(const Rat& initial = Rat(1));
  static Strategy pattern(BinWord bits, const Rat& initial = Rat(1));

  const std::string& name() const noexcept { return name_; }
  const Rat& initial() const noexcept { return initial_; }

  std::pair<Rat, Rat> children(const BinWord& sigma, const Rat& capital) const;

  MartingaleTable tabulate(unsigned depth) const;

 private:
  Strategy(Kind k, BinWord bits, Rat initial, std::string name)
      : kind_(k), bits_(std::move(bits)), initial_(std::move(initial)), name_(std::move(name)) {}
  std::pair<Rat, Rat> children(std::size_t depth, const Rat& capital) const;

  Kind kind_;
  BinWord bits_;
  Rat initial_;
  std::string name_;

  friend class SpineTable;
};

/// Values on the prefixes of a path and on their siblings:
/// onPath[k] at Z|k, offPath[k] at (Z|k) followed by the bit not taken.
class SpineTable {
 public:
  SpineTable() = default;
  /// Errc::unfair unless onPath[k+1] + offPath[k] = 2 onPath[k].
  SpineTable(BinWord path, std::vector<Rat> onPath, std::vector<Rat> offPath);

  static SpineTable alongPath(const Strategy& s, const BinWord& path);

  const BinWord& path() const noexcept { return path_; }
  std::size_t length() const noexcept { return path_.size(); }
  const std::vector<Rat>& onPath() const noexcept { return on_; }
  const std::vector<Rat>& offPath() const noexcept { return off_; }

 private:
  BinWord path_;
  std::vector<Rat> on_;
  std::vector<Rat> off_;
};

/// cdf of the measure of a spine at dyadics whose binary word only needs
/// spine values (all 0.(Z|n) and 0.(Z|n) + 2^-n). Errc::range otherwise.
Rat cdfAtDyadic(const SpineTable& s, const Rat& x);

struct SpineCdfFn {
  const SpineTable* spine;
  Rat operator()(const Rat& x) const { return cdfAtDyadic(*spine, x); }
};

/// Save/active split of M, halved: fair, nonnegative, and never drops by
/// more than 1 below any word. Grows without bound wherever M does.
MartingaleTable savingsTransform(const MartingaleTable& m);
SpineTable savingsTransform(const SpineTable& m);

/// min over words sigma and extensions eta in the table of M(sigma eta) - M(sigma).
Rat minSavingsDrop(const MartingaleTable& m);
Rat minSavingsDrop(const SpineTable& m);

enum class Phase : std::uint8_t { up, down };

struct PhaseTable {
  MartingaleTable b;
  std::vector<Phase> phase;         // indexed like TreeTable
  std::vector<std::uint8_t> fired;  // per parent: children that hit a threshold
};

struct PhaseSpine {
  SpineTable b;
  std::vector<Phase> onPath;
  std::vector<Phase> offPath;
};

/// Errc::precondition unless min drop >= -1.
PhaseTable buildOscillator(const MartingaleTable& m, unsigned depth);
PhaseSpine buildOscillator(const SpineTable& m);

/// Number of k in 1..|z| where the phase at z|k differs from z|k-1.
std::size_t countCrossings(const PhaseTable& p, const BinWord& z);
std::size_t countCrossings(const PhaseSpine& p, const BinWord& z);

/// Fairness, B(empty) = 2 up, phase invariants, 1 <= B <= 4, threshold
/// uniqueness and the entry inequalities against M.
std::vector<Check> verifyOscillator(const PhaseTable& p, const MartingaleTable& m);

}  // namespace lipx
