#include "doctest.h"

#include "lipx/error.hpp"
#include "lipx/oscillator.hpp"
#include "lipx/random.hpp"
#include "lipx/synthesis.hpp"

using namespace lipx;

namespace {

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

void requireAll(const std::vector<Check>& checks) {
  for (const auto& c : checks) {
    INFO(c.name << ": " << c.detail);
    CHECK(c.pass);
  }
}

}  // namespace

TEST_CASE("a single zigzag") {
  const ZigzagSpec z{Rat(1, 4), Rat(3, 4), 3};
  CHECK(zigzagEval(z, Rat(1, 8)) == Rat(0));
  CHECK(zigzagEval(z, Rat(1, 4)) == Rat(0));
  CHECK(zigzagEval(z, Rat(1, 4) + Rat(1, 16)) == Rat(1, 16));  // top of the first tooth
  CHECK(zigzagEval(z, Rat(3, 8)) == Rat(0));
  CHECK(zigzagEval(z, Rat(7, 8)) == Rat(0));
  const PiecewiseFn f = zigzagFn(z);
  CHECK(totalVariation(f) == Rat(1, 2));
  CHECK(f(Rat(11, 32)) == Rat(1, 32));
  CHECK(errcOf([] { validate({Rat(1, 4), Rat(3, 4), 2}); }) == Errc::spec);
  CHECK(errcOf([] { validate({Rat(3, 4), Rat(1, 4), 3}); }) == Errc::spec);
  CHECK(errcOf([] { validate({Rat(1, 3), Rat(3, 4), 5}); }) == Errc::spec);
}

TEST_CASE("zigzag sums for left-r.e. limits") {
  const PiecewiseFn f = fact31Build({Rat(0), Rat(1, 2), Rat(3, 4)});
  CHECK(totalVariation(f) == Rat(3, 4));
  CHECK(f(Rat(7, 8)) == Rat(0));
  CHECK(errcOf([] { fact31Build({Rat(1, 4)}); }) == Errc::schedule);           // exponent 2 at position 0
  CHECK(errcOf([] { fact31Build({Rat(1, 2), Rat(0)}); }) == Errc::schedule);   // decreasing
  CHECK(fact31Build({}) == PiecewiseFn::linear({Rat(0), Rat(1)}, {Rat(0), Rat(0)}));  // empty sum
}

TEST_CASE("property: random zigzag sums have variation equal to the last value") {
  rnd::Rng g(51);
  for (int n = 0; n < 40; ++n) {
    std::vector<Rat> a;
    Rat prev;
    for (unsigned i = 0; i < static_cast<unsigned>(rnd::integer(g, 1, 7)); ++i) {
      prev = rnd::dyadicIn(g, prev, Rat(1), i);
      a.push_back(prev);
    }
    const PiecewiseFn f = fact31Build(a);
    CHECK(totalVariation(f) == a.back());
    for (std::size_t i = 0; i < f.segments(); ++i) CHECK(f.segmentSlope(i).abs() <= Rat(1));
  }
}

TEST_CASE("signed martingale from a constant stage") {
  const StagedMartingale sm({MartingaleTable::constant(10, Rat(1))});
  const Lemma33Result r = lemma33Build(sm, 10, 10);
  CHECK(r.table.at(0, 0) == Rat(0));
  CHECK(r.builtDepth == 10);
  CHECK_FALSE(r.capExceeded);
  requireAll(verifyLemma33(sm, r));
  // |L| = 1 below the root once the first split is made
  for (unsigned l = 1; l <= 10; ++l) CHECK(levelVariation(r.table, BinWord(), l) == Rat(1));
}

TEST_CASE("property: random staged inputs pass every synthesis invariant") {
  rnd::Rng g(52);
  for (int n = 0; n < 12; ++n) {
    const StagedMartingale sm = rnd::stagedTable(g, 9, static_cast<std::size_t>(rnd::integer(g, 1, 4)), Rat(1));
    const Lemma33Result r = lemma33Build(sm, 9, 9);
    requireAll(verifyLemma33(sm, r));
    for (std::size_t s = 0; s + 1 < r.schedule.levels.size(); ++s) {
      CHECK(r.schedule.levels[s] < r.schedule.levels[s + 1]);
      CHECK(r.boundaryGap[s] <= Rat::pow2(-static_cast<long>(s)));
    }
  }
}

TEST_CASE("a schedule that cannot switch stops at the cap") {
  // all capital on one path: level variations below the root cannot come
  // within 2^-0 of M at every word before the cap
  const MartingaleTable spike = Strategy::parse("double-on-0").tabulate(6);
  const StagedMartingale sm({spike});
  const Lemma33Result r = lemma33Build(sm, 6, 1);
  CHECK(r.capExceeded);
  CHECK(r.builtDepth <= 6);
}

TEST_CASE("Lipschitz functions from oracles") {
  const Thm34Result lin = thm34Build(IntervalREOracle::linear(Rat(1, 2)), 8, 2, 8);
  CHECK(lin.lipschitz == Rat(1, 2));
  requireAll(verifyThm34(lin));
  CHECK(errcOf([] {
          thm34Build(oracleFromMachine(PrefixFreeMachine({{BinWord::parse("1"), Rat(0)}})), 4, 1, 4);
        }) == Errc::contract);
  rnd::Rng g(53);
  const StagedMartingale sm = rnd::stagedTable(g, 8, 2, Rat(1, 2));
  const Thm34Result r = thm34Build(IntervalREOracle::fromStaged(sm, Rat(1)), 8, 2, 8);
  requireAll(verifyThm34(r));
}

TEST_CASE("gated schedules") {
  rnd::Rng g(54);
  const StagedMartingale sm = rnd::stagedTable(g, 10, 2, Rat(1));
  const RuteSchedule s = ruteSchedule(sm, 20);
  CHECK(s.staged.stage(0).at(0, 0) == Rat(0));
  CHECK(s.staged.stage(1).at(0, 0) == Rat(0));
  for (std::size_t i = 1; i < s.gate.size(); ++i) CHECK(s.gate[i] >= s.gate[i - 1]);
  const RuteResult r = ruteBuild(sm, 10, 20);
  requireAll(verifyRute(r));

  CHECK(atomLevel(MartingaleTable::constant(6, Rat(1)), 3, 6) == 3u);
  CHECK(atomLevel(Strategy::parse("double-on-0").tabulate(6), 1, 6) == std::nullopt);
  CHECK(errcOf([] {
          ruteSchedule(StagedMartingale({Strategy::parse("double-on-1").tabulate(8)}), 8);
        }) == Errc::non_atomic_witness_missing);
}
