#include "doctest.h"

#include "lipx/error.hpp"
#include "lipx/martingale.hpp"
#include "lipx/random.hpp"

using namespace lipx;

namespace {

TreeTable table(std::initializer_list<std::pair<const char*, Rat>> rows) {
  std::vector<std::pair<BinWord, Rat>> e;
  for (const auto& [w, v] : rows) e.emplace_back(BinWord::parse(w), v);
  return TreeTable::fromEntries(e);
}

template <class F>
Errc errcOf(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.errc();
  }
  FAIL("no lipx::Error thrown");
  return Errc::parse;
}

}  // namespace

TEST_CASE("tables need every word up to their depth") {
  CHECK(errcOf([] { table({{"", Rat(1)}, {"0", Rat(1)}}); }) == Errc::incomplete_table);
  CHECK(errcOf([] { table({{"", Rat(1)}, {"", Rat(2)}}); }) == Errc::parse);
  const TreeTable t = table({{"", Rat(1)}, {"0", Rat(3, 2)}, {"1", Rat(1, 2)}});
  CHECK(t.depth() == 1);
  CHECK(t.at(BinWord::parse("1")) == Rat(1, 2));
}

TEST_CASE("fairness and sign are enforced on construction") {
  CHECK(errcOf([] { MartingaleTable(table({{"", Rat(1)}, {"0", Rat(1)}, {"1", Rat(2)}})); }) == Errc::unfair);
  CHECK(errcOf([] { MartingaleTable(table({{"", Rat(1)}, {"0", Rat(3)}, {"1", Rat(-1)}})); }) ==
        Errc::negative_value);
  const SignedMartingaleTable s(table({{"", Rat(0)}, {"0", Rat(1)}, {"1", Rat(-1)}}));
  CHECK(s(BinWord::parse("1")) == Rat(-1));
  const auto bad = checkFairness(table({{"", Rat(1)}, {"0", Rat(1)}, {"1", Rat(2)}}));
  REQUIRE(bad.size() == 1);
  CHECK(bad[0].word.empty());
  CHECK(bad[0].residual == Rat(1));
}

TEST_CASE("cdf of a hand-made table") {
  // all capital moves to the right half, then splits 1:3
  const MartingaleTable m(table({{"", Rat(1)},
                                 {"0", Rat(0)},
                                 {"1", Rat(2)},
                                 {"00", Rat(0)},
                                 {"01", Rat(0)},
                                 {"10", Rat(1)},
                                 {"11", Rat(3)}}));
  CHECK(cdfAtDyadic(m, Rat(1, 2)) == Rat(0));
  CHECK(cdfAtDyadic(m, Rat(3, 4)) == Rat(1, 4));
  CHECK(cdfAtDyadic(m, Rat(1)) == Rat(1));
  CHECK(cdfNoBet(m, Rat(7, 8)) == Rat(1, 4) + Rat(3) * Rat(1, 8));
  CHECK(cdfAsPiecewise(m)(Rat(5, 8)) == Rat(1, 8));
  CHECK(measureOfWord(m, BinWord::parse("11")) == Rat(3, 4));
  CHECK(errcOf([&] { cdfAtDyadic(m, Rat(1, 8)); }) == Errc::depth);
  CHECK(errcOf([&] { cdfAtDyadic(m, Rat(1, 3)); }) == Errc::parameter);
}

TEST_CASE("property: slopes of the cdf over cylinders are the table values") {
  rnd::Rng g(31);
  for (int n = 0; n < 10; ++n) {
    const MartingaleTable m = rnd::fairTable(g, 8, Rat(1, 2) + Rat(n));
    const CdfFn f{&m};
    for (unsigned l = 0; l <= 8; ++l) {
      for (std::size_t i = 0; i < (std::size_t{1} << l); ++i) {
        const Rat x = Rat(static_cast<long>(i)).timesPow2(-static_cast<long>(l));
        CHECK(slope(f, x, x + Rat::pow2(-static_cast<long>(l))) == m.at(l, i));
      }
    }
  }
}

TEST_CASE("enclosures shrink to the exact value on the table grid") {
  rnd::Rng g(32);
  const MartingaleTable m = rnd::boundedTable(g, 6, Rat(1, 2), Rat(2));
  const Enclosure e = cdfBounds(m, {Rat(1, 2), Rat(2)}, Rat(3, 64), Rat(17, 64));
  CHECK(e.lo == e.hi);
  CHECK(e.lo == cdfAtDyadic(m, Rat(17, 64)) - cdfAtDyadic(m, Rat(3, 64)));
  // constant 1 to depth 6, free in [1/2, 2] below: the cell [21/64, 22/64)
  // is cut at 1/3 and holds mass 1/64
  const MartingaleTable one = MartingaleTable::constant(6, Rat(1));
  const Enclosure wide = cdfBounds(one, {Rat(1, 2), Rat(2)}, Rat(1, 3), Rat(1, 2));
  const Rat cut = Rat(22, 64) - Rat(1, 3);
  const Rat rest = Rat(1, 2) - Rat(22, 64);
  CHECK(wide.lo == rest + max(Rat(1, 2) * cut, Rat(1, 64) - Rat(2) * (Rat(1, 64) - cut)));
  CHECK(wide.hi == rest + min(Rat(2) * cut, Rat(1, 64) - Rat(1, 2) * (Rat(1, 64) - cut)));
  CHECK(wide.contains(Rat(1, 2) - Rat(1, 3)));
  CHECK(errcOf([&] { cdfBounds(one, {Rat(3, 2), Rat(2)}, Rat(0), Rat(1)); }) == Errc::invalid_bounds);
  CHECK(errcOf([&] { cdfBounds(m, {Rat(1, 2), Rat(2)}, Rat(1, 2), Rat(1, 2)); }) == Errc::empty_interval);
}

TEST_CASE("property: enclosures contain every deeper continuation") {
  rnd::Rng g(33);
  for (int n = 0; n < 15; ++n) {
    const MartingaleTable deep = rnd::boundedTable(g, 10, Rat(1, 4), Rat(3, 2), 3);
    const MartingaleTable cut(deep.table().truncated(5));
    const CdfFn f{&deep};
    for (int t = 0; t < 20; ++t) {
      Rat x = rnd::rationalIn(g, Rat(0), Rat(1), 50), y = rnd::rationalIn(g, Rat(0), Rat(1), 50);
      if (x == y) continue;
      if (y < x) std::swap(x, y);
      CHECK(cdfBounds(cut, {Rat(1, 4), Rat(3, 2)}, x, y).contains(f(y) - f(x)));
    }
  }
}

TEST_CASE("level variation averages absolute values below a word") {
  const SignedMartingaleTable l(table({{"", Rat(0)},
                                       {"0", Rat(1)},
                                       {"1", Rat(-1)},
                                       {"00", Rat(2)},
                                       {"01", Rat(0)},
                                       {"10", Rat(-3)},
                                       {"11", Rat(1)}}));
  CHECK(levelVariation(l, BinWord(), 1) == Rat(1));
  CHECK(levelVariation(l, BinWord(), 2) == Rat(3, 2));
  CHECK(levelVariation(l, BinWord::parse("1"), 2) == Rat(2));
  CHECK(levelVariationRow(l, 1, 2) == std::vector<Rat>{Rat(1), Rat(2)});
  CHECK(variationLowerBound(l, BinWord::parse("0")) == Rat(1));
}

TEST_CASE("staged martingales must grow") {
  const MartingaleTable a = MartingaleTable::constant(2, Rat(1));
  const MartingaleTable b = MartingaleTable::constant(2, Rat(2));
  CHECK(errcOf([&] { StagedMartingale({b, a}); }) == Errc::staging);
  CHECK(errcOf([&] { StagedMartingale({a, MartingaleTable::constant(3, Rat(2))}); }) == Errc::staging);
  CHECK(errcOf([] { StagedMartingale(std::vector<MartingaleTable>{}); }) == Errc::staging);
  StagedMartingale sm({a});
  sm.append(b);
  CHECK(sm.stage(7) == b);
  const StagedMartingale z = sm.withLeadingZeros(2);
  CHECK(z.stageCount() == 4);
  CHECK(z.stage(0).at(0, 0) == Rat(0));
  CHECK(supStages(sm, BinWord::parse("01")) == Rat(2));
}

TEST_CASE("property: random staged tables are monotone and bounded") {
  rnd::Rng g(34);
  for (int n = 0; n < 10; ++n) {
    const StagedMartingale sm = rnd::stagedTable(g, 7, 4, Rat(1));
    for (std::size_t s = 0; s < sm.stageCount(); ++s) {
      for (unsigned l = 0; l <= 7; ++l) {
        for (std::size_t i = 0; i < (std::size_t{1} << l); ++i) {
          CHECK(sm.stage(s).at(l, i) <= Rat(2));
          if (s > 0) CHECK(sm.stage(s - 1).at(l, i) <= sm.stage(s).at(l, i));
        }
      }
    }
  }
}
