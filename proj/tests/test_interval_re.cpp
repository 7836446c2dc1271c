#include "doctest.h"

#include "lipx/error.hpp"
#include "lipx/interval_re.hpp"
#include "lipx/random.hpp"

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

PrefixFreeMachine machine(std::initializer_list<std::pair<const char*, Rat>> rows) {
  std::map<BinWord, Rat> t;
  for (const auto& [w, v] : rows) t.emplace(BinWord::parse(w), v);
  return PrefixFreeMachine(t);
}

}  // namespace

TEST_CASE("prefix-free machines reject prefixes and bad outputs") {
  CHECK(errcOf([] { machine({{"0", Rat(1, 2)}, {"01", Rat(1, 4)}}); }) == Errc::machine);
  CHECK(errcOf([] { machine({{"0", Rat(1, 2)}, {"1", Rat(1, 3)}}); }) == Errc::machine);
  CHECK(errcOf([] { machine({{"0", Rat(1)}}); }) == Errc::machine);
  CHECK(errcOf([] { machine({{"1", Rat(0)}, {"00", Rat(1, 4)}, {"0010", Rat(0)}}); }) == Errc::machine);
  CHECK_NOTHROW(machine({{"1", Rat(0)}, {"00", Rat(1, 4)}, {"010", Rat(0)}}));
}

TEST_CASE("the machine cdf counts programs with smaller outputs") {
  const PrefixFreeMachine s = machine({{"1", Rat(1, 4)}, {"00", Rat(1, 2)}, {"010", Rat(1, 4)}});
  CHECK(fsEval(s, Rat(0)) == Rat(0));
  CHECK(fsEval(s, Rat(1, 4)) == Rat(0));  // strict inequality
  CHECK(fsEval(s, Rat(1, 3)) == Rat(1, 2) + Rat(1, 8));
  CHECK(fsEval(s, Rat(1)) == Rat(7, 8));
  const IntervalREOracle f = oracleFromMachine(s);
  CHECK(f.approx(Rat(1, 4), Rat(3, 4), 0) == Rat(1, 4) + Rat(1, 2) + Rat(1, 8) - Rat(0));
  CHECK_FALSE(f.lipschitz().has_value());
}

TEST_CASE("oracles check their intervals") {
  const IntervalREOracle f = IntervalREOracle::linear(Rat(3, 2));
  CHECK(f.approx(Rat(1, 4), Rat(1, 2), 5) == Rat(3, 8));
  CHECK(errcOf([&] { f.approx(Rat(1, 2), Rat(1, 4), 0); }) == Errc::oracle);
  CHECK(errcOf([&] { f.approx(Rat(0), Rat(2), 0); }) == Errc::oracle);
  CHECK(errcOf([] { IntervalREOracle::linear(Rat(-1)); }) == Errc::oracle);
  CHECK(IntervalREOracle::zero().approx(Rat(0), Rat(1), 3) == Rat(0));
}

TEST_CASE("increment tables resolve only their own grid") {
  const IntervalREOracle f =
      IntervalREOracle::fromIncrements(2, {{Rat(1, 8), Rat(0), Rat(1, 4), Rat(0)}, {Rat(1, 4), Rat(1, 8), Rat(1, 4), Rat(1, 8)}},
                                       Rat(1));
  CHECK(f.approx(Rat(0), Rat(3, 4), 0) == Rat(3, 8));
  CHECK(f.approx(Rat(1, 4), Rat(1), 1) == Rat(1, 2));
  CHECK(f.approx(Rat(1, 4), Rat(1), 9) == Rat(1, 2));  // stages past the last repeat it
  CHECK(errcOf([&] { f.approx(Rat(0), Rat(1, 8), 0); }) == Errc::oracle);
  CHECK(errcOf([] { IntervalREOracle::fromIncrements(1, {{Rat(1)}}, std::nullopt); }) == Errc::oracle);
}

TEST_CASE("oracle to staged martingale") {
  const StagedMartingale lin = oracleToStaged(IntervalREOracle::linear(Rat(2)), 4, 2);
  CHECK(lin.stageCount() == 2);
  CHECK(lin.stage(1) == MartingaleTable::constant(4, Rat(2)));

  const IntervalREOracle inc = IntervalREOracle::fromIncrements(
      1, {{Rat(1, 4), Rat(0)}, {Rat(1, 4), Rat(1, 8)}}, Rat(1, 2));
  const StagedMartingale sm = oracleToStaged(inc, 1, 2);
  CHECK(sm.stage(0).at(1, 0) == Rat(1, 2));
  CHECK(sm.stage(1).at(0, 0) == Rat(3, 8));

  // declared bound too small
  CHECK(errcOf([] {
          oracleToStaged(IntervalREOracle::fromIncrements(1, {{Rat(1, 2), Rat(0)}}, Rat(1, 2)), 1, 1);
        }) == Errc::oracle);
  // decreasing stages
  CHECK(errcOf([] {
          oracleToStaged(IntervalREOracle::fromIncrements(1, {{Rat(1, 4), Rat(0)}, {Rat(0), Rat(0)}}, Rat(1)), 1, 2);
        }) == Errc::staging);
  // squares are not additive
  const IntervalREOracle sq([](const Rat& p, const Rat& q, std::size_t) { return q * q - p * p - (q - p) * (q - p); },
                            std::nullopt, "broken");
  CHECK(errcOf([&] { oracleToStaged(sq, 2, 1); }) == Errc::non_additive_oracle);
}

TEST_CASE("property: staged martingales survive the oracle round trip") {
  rnd::Rng g(41);
  for (int n = 0; n < 8; ++n) {
    const StagedMartingale sm = rnd::stagedTable(g, 6, 3, Rat(1));
    const StagedMartingale back = oracleToStaged(IntervalREOracle::fromStaged(sm, Rat(2)), 6, 3);
    for (std::size_t s = 0; s < 3; ++s) CHECK(back.stage(s) == sm.stage(s));
  }
}
