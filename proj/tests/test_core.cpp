#include "doctest.h"

#include "lipx/dyadic.hpp"
#include "lipx/error.hpp"
#include "lipx/piecewise.hpp"
#include "lipx/random.hpp"
#include "lipx/rat.hpp"

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

}  // namespace

TEST_CASE("rationals parse, canonicalize and print") {
  CHECK(Rat::parse("6/8") == Rat(3, 4));
  CHECK(Rat::parse("-6/8").str() == "-3/4");
  CHECK(Rat::parse("5").str() == "5");
  CHECK(Rat(4, -6).str() == "-2/3");
  CHECK(errcOf([] { Rat::parse("1/0"); }) == Errc::parse);
  CHECK(errcOf([] { Rat::parse("1.5"); }) == Errc::parse);
  CHECK(errcOf([] { Rat::parse(""); }) == Errc::parse);
  CHECK_THROWS_AS((void)(Rat(1) / Rat(0)), Error);
}

TEST_CASE("dyadic exponents and powers of two") {
  CHECK(Rat(3, 8).isDyadic());
  CHECK_FALSE(Rat(1, 3).isDyadic());
  CHECK(Rat(3, 8).dyadicExponent() == 3);
  CHECK(Rat(5).dyadicExponent() == 0);
  CHECK(errcOf([] { (void)Rat(1, 6).dyadicExponent(); }) == Errc::parameter);
  CHECK(Rat::pow2(-3) == Rat(1, 8));
  CHECK(Rat::pow2(4) == Rat(16));
  CHECK(Rat(3, 5).timesPow2(3) == Rat(24, 5));
  CHECK(Rat(3, 5).timesPow2(-2) == Rat(3, 20));
}

TEST_CASE("exact powers are rational only when the root is") {
  CHECK(exactPow(Rat(9, 4), Rat(1, 2)) == Rat(3, 2));
  CHECK(exactPow(Rat(-8, 27), Rat(2, 3)) == Rat(4, 9));
  CHECK(exactPow(Rat(2), Rat(1, 2)) == std::nullopt);
  CHECK(powInt(Rat(-2, 3), 3) == Rat(-8, 27));
  CHECK(errcOf([] { requireExactPow(Rat(2), Rat(1, 2)); }) == Errc::inexact_power);
}

TEST_CASE("binary words") {
  const BinWord w = BinWord::parse("0110");
  CHECK(w.index() == 6);
  CHECK(BinWord::fromIndex(4, 6) == w);
  CHECK(w.parent().str() == "011");
  CHECK(w.sibling().str() == "0111");
  CHECK(BinWord::parse("01").isPrefixOf(w));
  CHECK(BinWord::parse("1") > BinWord::parse("0"));
  CHECK(BinWord::parse("00") > BinWord::parse("1"));  // shortlex
  CHECK(errcOf([] { BinWord::parse("012"); }) == Errc::parse);
}

TEST_CASE("dyadics convert to and from words") {
  CHECK(Dyadic::fromWord(BinWord::parse("101")).value() == Rat(5, 8));
  CHECK(Dyadic(Rat(5, 8)).toWord(5).str() == "10100");
  CHECK(errcOf([] { (void)Dyadic(Rat(5, 8)).toWord(2); }) == Errc::depth);
  CHECK(errcOf([] { Dyadic(Rat(1, 3)); }) == Errc::parameter);
}

TEST_CASE("step functions take the right limit at breakpoints") {
  const PiecewiseFn f = PiecewiseFn::step({Rat(0), Rat(1, 2), Rat(1)}, {Rat(1), Rat(-2)});
  CHECK(f(Rat(0)) == Rat(1));
  CHECK(f(Rat(1, 2)) == Rat(-2));
  CHECK(f(Rat(1)) == Rat(-2));
  CHECK(errcOf([&] { f(Rat(3, 2)); }) == Errc::range);
  CHECK(integratePiecewise(f, Rat(3, 4)) == Rat(0));
  CHECK(totalVariation(f) == Rat(3));
}

TEST_CASE("malformed piecewise functions are rejected") {
  CHECK(errcOf([] { PiecewiseFn::step({Rat(0), Rat(1)}, {Rat(1), Rat(2)}); }) == Errc::parameter);
  CHECK(errcOf([] { PiecewiseFn::linear({Rat(0), Rat(1, 3), Rat(1)}, {Rat(0), Rat(0), Rat(0)}); }) ==
        Errc::parameter);
  CHECK(errcOf([] { PiecewiseFn::linear({Rat(1, 2), Rat(1)}, {Rat(0), Rat(0)}); }) == Errc::parameter);
}

TEST_CASE("linear interpolation and grid variation") {
  const PiecewiseFn f = PiecewiseFn::linear({Rat(0), Rat(1, 4), Rat(1)}, {Rat(0), Rat(1, 2), Rat(-1)});
  CHECK(f(Rat(1, 8)) == Rat(1, 4));
  CHECK(f(Rat(1, 3)) == Rat(1, 2) - Rat(2) * Rat(1, 12));
  CHECK(totalVariation(f) == Rat(2));
  CHECK(gridVariation(f, Rat(0), Rat(1), 2, Rat(1)) == Rat(2));
  // a grid that skips the peak sees less
  CHECK(gridVariation(f, Rat(0), Rat(1), 0, Rat(1)) == Rat(1));
  CHECK(errcOf([&] { gridVariation(f, Rat(1, 2), Rat(1, 2), 3, Rat(1)); }) == Errc::empty_interval);
  CHECK(errcOf([&] { gridVariation(f, Rat(0), Rat(1), 3, Rat(1, 2)); }) == Errc::parameter);
  CHECK(errcOf([&] { slope(f, Rat(1, 2), Rat(1, 2)); }) == Errc::degenerate_pair);
}

TEST_CASE("grid points include the ends and the dyadics strictly between") {
  const auto t = gridPoints(Rat(1, 3), Rat(7, 8), 2);
  REQUIRE(t.size() == 4);
  CHECK(t[0] == Rat(1, 3));
  CHECK(t[1] == Rat(1, 2));
  CHECK(t[2] == Rat(3, 4));
  CHECK(t[3] == Rat(7, 8));
  CHECK(gridPoints(Rat(1, 4), Rat(3, 4), 2).size() == 3);
}

TEST_CASE("p-variation of a linear function is exact in power form") {
  // slope 2 on [0,1/2], then flat: V_p = 2^p * 1/2
  const PiecewiseFn f = PiecewiseFn::linear({Rat(0), Rat(1, 2), Rat(1)}, {Rat(0), Rat(1), Rat(1)});
  CHECK(exactPVariation(f, Rat(2)) == Rat(2));
  CHECK(exactPVariation(f, Rat(3)) == Rat(4));
  const PVariationNorm n = pVariationNorm(f, Rat(2));
  CHECK(n.pVariation == Rat(2));
  CHECK_FALSE(n.norm.has_value());  // sqrt 2
  CHECK(*pVariationNorm(f, Rat(1)).norm == Rat(1));
  const PiecewiseFn jump = PiecewiseFn::step({Rat(0), Rat(1, 2), Rat(1)}, {Rat(0), Rat(1)});
  CHECK(errcOf([&] { exactPVariation(jump, Rat(2)); }) == Errc::parameter);
}

TEST_CASE("property: variation of an antiderivative is the L1 norm") {
  rnd::Rng g(11);
  for (int n = 0; n < 40; ++n) {
    const PiecewiseFn h = rnd::stepFn(g, 5, static_cast<std::size_t>(rnd::integer(g, 1, 9)), Rat(2), 4);
    const PiecewiseFn f = antiderivative(h);
    CHECK(f(Rat(1)) == integratePiecewise(h, Rat(1)));
    CHECK(totalVariation(f) == integralAbsPow(h, Rat(1)));
    CHECK(gridVariation(f, Rat(0), Rat(1), 5, Rat(1)) == totalVariation(f));
  }
}

TEST_CASE("property: grid variation never decreases under refinement") {
  rnd::Rng g(12);
  for (int n = 0; n < 30; ++n) {
    const PiecewiseFn f = antiderivative(rnd::stepFn(g, 6, 7, Rat(3), 8));
    Rat prev;
    for (unsigned d = 0; d <= 7; ++d) {
      const Rat v = gridVariation(f, Rat(0), Rat(1), d, Rat(1));
      CHECK(v >= prev);
      prev = v;
    }
    CHECK(prev == totalVariation(f));
  }
}

TEST_CASE("derivative bounds along a prefix") {
  const PiecewiseFn f = PiecewiseFn::linear({Rat(0), Rat(1, 2), Rat(1)}, {Rat(0), Rat(3, 2), Rat(2)});
  const DerivBounds d = dyadicDerivBounds(f, BinWord::parse("000"), 0, 3);
  CHECK(d.maxSlope == Rat(3));
  CHECK(d.minSlope == Rat(2));
  CHECK(d.minAt == 0);
  CHECK(d.maxAt == 1);
  CHECK(errcOf([&] { dyadicDerivBounds(f, BinWord::parse("0"), 0, 3); }) == Errc::insufficient_prefix);
}

TEST_CASE("uniform grid samples round-trip through onUniformGrid") {
  const PiecewiseFn f = PiecewiseFn::linear({Rat(0), Rat(3, 8), Rat(1)}, {Rat(1), Rat(0), Rat(5)});
  const auto s = sampleGrid(f, 3);
  std::vector<Rat> nodes;
  for (const auto& [x, y] : s) nodes.push_back(y);
  CHECK(PiecewiseFn::onUniformGrid(3, nodes).simplified() == f);
}
