#include "lipx/martingale.hpp"

#include <algorithm>
#include <map>

#include "lipx/error.hpp"
#include "lipx/kernels.hpp"

namespace lipx {

namespace {

void requireLevel(unsigned level, unsigned depth) {
  if (level > depth) {
    throw Error(Errc::depth, "level " + std::to_string(level) + " exceeds table depth " + std::to_string(depth));
  }
}

}  // namespace

TreeTable::TreeTable(unsigned depth, const Rat& fill) : depth_(depth) {
  if (depth > kMaxTableDepth) {
    throw Error(Errc::depth, "table depth " + std::to_string(depth) + " exceeds " + std::to_string(kMaxTableDepth));
  }
  values_.assign(offset(depth + 1), fill);
}

TreeTable TreeTable::fromEntries(const std::vector<std::pair<BinWord, Rat>>& entries) {
  if (entries.empty()) throw Error(Errc::incomplete_table, "no entries");
  std::size_t depth = 0;
  for (const auto& [w, v] : entries) depth = std::max(depth, w.size());
  if (depth > kMaxTableDepth) throw Error(Errc::depth, "word longer than " + std::to_string(kMaxTableDepth));
  TreeTable t(static_cast<unsigned>(depth));
  std::vector<char> seen(t.size(), 0);
  for (const auto& [w, v] : entries) {
    const std::size_t i = t.indexOf(w);
    if (seen[i]) throw Error(Errc::parse, "duplicate entry for word '" + w.str() + "'");
    seen[i] = 1;
    t.values_[i] = v;
  }
  for (unsigned l = 0; l <= t.depth_; ++l) {
    for (std::size_t i = 0; i < (std::size_t{1} << l); ++i) {
      if (!seen[offset(l) + i]) {
        throw Error(Errc::incomplete_table, "missing word '" + BinWord::fromIndex(l, i).str() + "'");
      }
    }
  }
  return t;
}

std::size_t TreeTable::indexOf(const BinWord& w) const {
  requireLevel(static_cast<unsigned>(std::min<std::size_t>(w.size(), 64)), depth_);
  return offset(static_cast<unsigned>(w.size())) + w.index();
}

const Rat& TreeTable::at(const BinWord& w) const { return values_[indexOf(w)]; }
Rat& TreeTable::at(const BinWord& w) { return values_[indexOf(w)]; }

std::span<const Rat> TreeTable::level(unsigned l) const {
  requireLevel(l, depth_);
  return std::span<const Rat>(values_).subspan(offset(l), std::size_t{1} << l);
}

std::span<Rat> TreeTable::level(unsigned l) {
  requireLevel(l, depth_);
  return std::span<Rat>(values_).subspan(offset(l), std::size_t{1} << l);
}

TreeTable TreeTable::truncated(unsigned depth) const {
  requireLevel(depth, depth_);
  TreeTable t(depth);
  std::copy_n(values_.begin(), t.values_.size(), t.values_.begin());
  return t;
}

std::vector<FairnessViolation> checkFairness(const TreeTable& t) {
  std::vector<FairnessViolation> out;
  for (unsigned l = 0; l < t.depth(); ++l) {
    const auto parents = t.level(l);
    const auto children = t.level(l + 1);
    for (std::size_t i : kernels::fairnessViolations(parents, children)) {
      out.push_back({BinWord::fromIndex(l, i), children[2 * i] + children[2 * i + 1] - parents[i] * Rat(2)});
    }
  }
  return out;
}

std::vector<FairnessViolation> checkFairness(const SignedMartingaleTable& m) { return checkFairness(m.table()); }

SignedMartingaleTable::SignedMartingaleTable(TreeTable t) : t_(std::move(t)) {
  const auto bad = checkFairness(t_);
  if (!bad.empty()) {
    throw Error(Errc::unfair, std::to_string(bad.size()) + " fairness violation(s), first at '" + bad[0].word.str() +
                                  "' with residual " + bad[0].residual.str());
  }
}

MartingaleTable::MartingaleTable(TreeTable t) : SignedMartingaleTable(std::move(t)) {
  for (unsigned l = 0; l <= t_.depth(); ++l) {
    const auto row = t_.level(l);
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (row[i].sign() < 0) {
        throw Error(Errc::negative_value, "negative value " + row[i].str() + " at '" + BinWord::fromIndex(l, i).str() + "'");
      }
    }
  }
}

MartingaleTable MartingaleTable::constant(unsigned depth, const Rat& c) {
  if (c.sign() < 0) throw Error(Errc::negative_value, "constant " + c.str() + " is negative");
  MartingaleTable m;
  m.t_ = TreeTable(depth, c);
  return m;
}

Rat measureOfWord(const SignedMartingaleTable& m, const BinWord& sigma) {
  return m(sigma).timesPow2(-static_cast<long>(sigma.size()));
}

Rat cdfAtDyadic(const SignedMartingaleTable& m, const Rat& x) {
  if (x < Rat(0) || x > Rat(1)) throw Error(Errc::range, x.str() + " is outside [0,1]");
  if (!x.isDyadic()) throw Error(Errc::parameter, x.str() + " is not dyadic; use cdfBounds");
  if (x == Rat(1)) return m.at(0, 0);
  const unsigned long e = x.dyadicExponent();
  if (e > m.depth()) {
    throw Error(Errc::depth, "resolution 2^-" + std::to_string(e) + " exceeds table depth " + std::to_string(m.depth()));
  }
  // mu[0, 0.w) is the sum, over the 1-bits of w, of the left sibling
  // cylinder; Horner form so each step only halves.
  const std::uint64_t idx = x.num().get_ui();  // denominator is exactly 2^e
  mpq_class s;
  for (unsigned i = e; i-- > 0;) {
    const std::uint64_t prefix = idx >> (e - i - 1);  // w restricted to i+1 bits
    if (prefix & 1) s += m.at(i + 1, prefix - 1).mpq();
    mpq_div_2exp(s.get_mpq_t(), s.get_mpq_t(), 1);
  }
  return Rat(std::move(s));
}

Rat cdfNoBet(const SignedMartingaleTable& m, const Rat& x) {
  if (x < Rat(0) || x > Rat(1)) throw Error(Errc::range, x.str() + " is outside [0,1]");
  if (x == Rat(1)) return m.at(0, 0);
  const unsigned d = m.depth();
  const Rat scale = Rat::pow2(static_cast<long>(d));
  const mpz_class cell = (x * scale).floor();
  const Rat left = Rat(cell) / scale;
  return cdfAtDyadic(m, left) + m.at(d, cell.get_ui()) * (x - left);
}

PiecewiseFn cdfAsPiecewise(const SignedMartingaleTable& m) {
  const unsigned d = m.depth();
  std::vector<Rat> nodes = kernels::exclusiveScan(m.level(d));
  const Rat h = Rat::pow2(-static_cast<long>(d));
  kernels::forEachIndex(nodes.size(), [&](std::size_t i) { nodes[i] *= h; });
  return PiecewiseFn::onUniformGrid(d, std::move(nodes));
}

void requireBounds(const MartingaleTable& m, const BoundedMartingaleBounds& b) {
  if (b.c.sign() < 0 || !(b.c < b.d)) {
    throw Error(Errc::invalid_bounds, "need 0 <= c < d, got c = " + b.c.str() + ", d = " + b.d.str());
  }
  for (unsigned l = 0; l <= m.depth(); ++l) {
    const auto row = m.level(l);
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (row[i] < b.c || row[i] > b.d) {
        throw Error(Errc::invalid_bounds, "value " + row[i].str() + " at '" + BinWord::fromIndex(l, i).str() +
                                              "' is outside [" + b.c.str() + ", " + b.d.str() + "]");
      }
    }
  }
}

namespace {

// Measure of a sub-interval of length len inside a deepest-level cell of
// width w carrying mass cellMass, for any [c,d]-bounded continuation.
Enclosure partialCell(const Rat& len, const Rat& w, const Rat& cellMass, const BoundedMartingaleBounds& b) {
  return {max(b.c * len, cellMass - b.d * (w - len)), min(b.d * len, cellMass - b.c * (w - len))};
}

}  // namespace

Enclosure cdfBounds(const MartingaleTable& m, const BoundedMartingaleBounds& b, const Rat& x, const Rat& y) {
  requireBounds(m, b);
  if (x < Rat(0) || y > Rat(1)) throw Error(Errc::range, "pair outside [0,1]");
  if (!(x < y)) throw Error(Errc::empty_interval, "need x < y");
  const unsigned d = m.depth();
  const Rat scale = Rat::pow2(static_cast<long>(d));
  const Rat w = Rat::pow2(-static_cast<long>(d));
  const mpz_class i = (x * scale).floor();
  const mpz_class j = (y * scale).ceil();  // cells i .. j-1 meet [x, y)
  const Rat xl = Rat(i) / scale, yr = Rat(j) / scale;

  Enclosure e;
  if (j - i == 1) {
    e = partialCell(y - x, w, m.at(d, i.get_ui()) * w, b);
  } else {
    // whole cells strictly inside, plus the two partial end cells
    const Rat inner = cdfAtDyadic(m, yr - w) - cdfAtDyadic(m, xl + w);
    const Enclosure left = partialCell(xl + w - x, w, m.at(d, i.get_ui()) * w, b);
    const Enclosure right = partialCell(y - (yr - w), w, m.at(d, j.get_ui() - 1) * w, b);
    e = {inner + left.lo + right.lo, inner + left.hi + right.hi};
  }
  e.lo = max(e.lo, b.c * (y - x));
  e.hi = min(e.hi, b.d * (y - x));
  return e;
}

Rat levelVariation(const SignedMartingaleTable& l, const BinWord& sigma, unsigned b) {
  const auto a = static_cast<unsigned>(sigma.size());
  if (a > b) throw Error(Errc::depth, "level " + std::to_string(b) + " is above |sigma| = " + std::to_string(a));
  requireLevel(b, l.depth());
  const std::size_t block = std::size_t{1} << (b - a);
  const auto row = l.level(b).subspan(sigma.index() * block, block);
  return kernels::sumAbs(row) * Rat::pow2(-static_cast<long>(b - a));
}

std::vector<Rat> levelVariationRow(const SignedMartingaleTable& l, unsigned a, unsigned b) {
  if (a > b) throw Error(Errc::depth, "level " + std::to_string(b) + " is above " + std::to_string(a));
  requireLevel(b, l.depth());
  std::vector<Rat> out = kernels::blockAbsSums(l.level(b), std::size_t{1} << (b - a));
  const Rat scale = Rat::pow2(-static_cast<long>(b - a));
  for (Rat& v : out) v *= scale;
  return out;
}

Rat variationLowerBound(const SignedMartingaleTable& l, const BinWord& sigma) {
  return levelVariation(l, sigma, l.depth());
}

namespace {

void requireNextStage(const MartingaleTable& prev, const MartingaleTable& next, std::size_t s) {
  if (prev.depth() != next.depth()) {
    throw Error(Errc::staging, "stage " + std::to_string(s) + " has depth " + std::to_string(next.depth()) +
                                   ", earlier stages " + std::to_string(prev.depth()));
  }
  const auto& a = prev.table();
  const auto& b = next.table();
  for (unsigned l = 0; l <= a.depth(); ++l) {
    const auto ra = a.level(l), rb = b.level(l);
    for (std::size_t i = 0; i < ra.size(); ++i) {
      if (rb[i] < ra[i]) {
        throw Error(Errc::staging, "stage " + std::to_string(s) + " decreases at '" + BinWord::fromIndex(l, i).str() +
                                       "' (" + ra[i].str() + " -> " + rb[i].str() + ")");
      }
    }
  }
}

}  // namespace

StagedMartingale::StagedMartingale(std::vector<MartingaleTable> stages) {
  if (stages.empty()) throw Error(Errc::staging, "no stages");
  for (auto& m : stages) append(std::move(m));
}

void StagedMartingale::append(MartingaleTable next) {
  if (!stages_.empty()) requireNextStage(stages_.back(), next, stages_.size());
  stages_.push_back(std::move(next));
}

StagedMartingale StagedMartingale::withLeadingZeros(std::size_t zeros) const {
  std::vector<MartingaleTable> s(zeros, MartingaleTable::constant(depth(), Rat(0)));
  s.insert(s.end(), stages_.begin(), stages_.end());
  StagedMartingale out;
  out.stages_ = std::move(s);
  return out;
}

Rat supStages(const StagedMartingale& sm, const BinWord& sigma) { return sm.stages().back()(sigma); }

}  // namespace lipx
