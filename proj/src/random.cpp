#include "lipx/random.hpp"

#include <algorithm>
#include <optional>
#include <set>

#include "lipx/error.hpp"

namespace lipx::rnd {

namespace {

std::optional<Rat> gridPointIn(Rng& g, const Rat& lo, const Rat& hi, const Rat& unit) {
  const mpz_class kmin = (lo / unit).ceil();
  const mpz_class kmax = (hi / unit).floor();
  if (kmin > kmax) return std::nullopt;
  const long k = integer(g, kmin.get_si(), kmax.get_si());
  return Rat(k) * unit;
}

}  // namespace

long integer(Rng& g, long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(g); }

Rat dyadicIn(Rng& g, const Rat& lo, const Rat& hi, unsigned bits) {
  auto r = gridPointIn(g, lo, hi, Rat::pow2(-static_cast<long>(bits)));
  if (!r) throw Error(Errc::parameter, "no multiple of 2^-" + std::to_string(bits) + " in [" + lo.str() + ", " +
                                           hi.str() + "]");
  return *r;
}

Rat rationalIn(Rng& g, const Rat& lo, const Rat& hi, long maxDen) {
  for (;;) {
    const long den = integer(g, 1, maxDen);
    if (auto r = gridPointIn(g, lo, hi, Rat(1, den))) return *r;
  }
}

MartingaleTable fairTable(Rng& g, unsigned depth, const Rat& root, unsigned bits) {
  TreeTable t(depth);
  t.at(0, 0) = root;
  // same draws as dyadicIn(g, 0, 2, bits), without re-deriving the grid per node
  const long top = 2L << bits;
  const Rat unit = Rat::pow2(-static_cast<long>(bits));
  for (unsigned l = 0; l < depth; ++l) {
    for (std::size_t i = 0; i < (std::size_t{1} << l); ++i) {
      const Rat& v = t.at(l, i);
      const Rat left = v * (Rat(integer(g, 0, top)) * unit);
      t.at(l + 1, 2 * i) = left;
      t.at(l + 1, 2 * i + 1) = v * Rat(2) - left;
    }
  }
  return MartingaleTable(std::move(t));
}

MartingaleTable boundedTable(Rng& g, unsigned depth, const Rat& c, const Rat& d, unsigned bits) {
  if (c.sign() < 0 || d < c) throw Error(Errc::invalid_bounds, "need 0 <= c <= d");
  const Rat unit = Rat::pow2(-static_cast<long>(bits));
  TreeTable t(depth);
  t.at(0, 0) = gridPointIn(g, c, d, unit).value_or(c);
  for (unsigned l = 0; l < depth; ++l) {
    for (std::size_t i = 0; i < (std::size_t{1} << l); ++i) {
      const Rat v = t.at(l, i);
      const Rat lo = max(c, v * Rat(2) - d);
      const Rat hi = min(d, v * Rat(2) - c);
      const Rat left = gridPointIn(g, lo, hi, unit).value_or(v);
      t.at(l + 1, 2 * i) = left;
      t.at(l + 1, 2 * i + 1) = v * Rat(2) - left;
    }
  }
  return MartingaleTable(std::move(t));
}

StagedMartingale stagedTable(Rng& g, unsigned depth, std::size_t stages, const Rat& step, unsigned bits) {
  if (stages == 0) throw Error(Errc::staging, "need at least one stage");
  std::vector<MartingaleTable> out{boundedTable(g, depth, Rat(0), step, bits)};
  for (std::size_t s = 1; s < stages; ++s) {
    const MartingaleTable inc = boundedTable(g, depth, Rat(0), step * Rat::pow2(-static_cast<long>(s)), bits);
    TreeTable next = out.back().table();
    for (unsigned l = 0; l <= depth; ++l) {
      for (std::size_t i = 0; i < (std::size_t{1} << l); ++i) next.at(l, i) += inc.at(l, i);
    }
    out.emplace_back(std::move(next));
  }
  return StagedMartingale(std::move(out));
}

PiecewiseFn stepFn(Rng& g, unsigned maxLevel, std::size_t pieces, const Rat& bound, long denominator) {
  const long cells = 1L << maxLevel;
  std::set<long> cuts;
  const std::size_t want = std::min<std::size_t>(pieces > 0 ? pieces - 1 : 0, static_cast<std::size_t>(cells - 1));
  while (cuts.size() < want) cuts.insert(integer(g, 1, cells - 1));
  std::vector<Rat> b{Rat(0)};
  for (long k : cuts) b.push_back(Rat(k, cells));
  b.push_back(Rat(1));
  const long amax = (bound * Rat(denominator)).floor().get_si();
  std::vector<Rat> v;
  for (std::size_t i = 0; i + 1 < b.size(); ++i) v.push_back(Rat(integer(g, -amax, amax), denominator));
  return PiecewiseFn::step(std::move(b), std::move(v));
}

namespace {

DyadicCube randomCube(Rng& g, unsigned dim, unsigned maxLevel) {
  DyadicCube c{static_cast<unsigned>(integer(g, 1, maxLevel)), {}};
  for (unsigned j = 0; j < dim; ++j) c.index.push_back(static_cast<std::uint64_t>(integer(g, 0, (1L << c.level) - 1)));
  return c;
}

}  // namespace

DyadicCubeSet cubeSet(Rng& g, unsigned dim, unsigned maxLevel, std::size_t count) {
  DyadicCubeSet s(dim);
  for (std::size_t i = 0; i < count; ++i) s = s.unite(DyadicCubeSet::of(randomCube(g, dim, maxLevel)));
  return s;
}

CubeStepFn cubeStepFn(Rng& g, unsigned dim, unsigned maxLevel, std::size_t count, const Rat& bound,
                      long denominator) {
  CubeStepFn f(dim);
  if (count == 0) return f;
  const long amax = (bound * Rat(denominator) / Rat(static_cast<long>(count))).floor().get_si();
  for (std::size_t i = 0; i < count; ++i) {
    const Rat v(integer(g, -amax, amax), denominator);
    f = f + CubeStepFn::indicator(DyadicCubeSet::of(randomCube(g, dim, maxLevel)), v);
  }
  return f;
}

}  // namespace lipx::rnd
