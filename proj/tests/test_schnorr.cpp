#include "doctest.h"

#include "lipx/cubes.hpp"
#include "lipx/error.hpp"
#include "lipx/random.hpp"
#include "lipx/schnorr.hpp"

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

DyadicCube cube(unsigned level, std::vector<std::uint64_t> idx) { return {level, std::move(idx)}; }

const Check& find(const std::vector<Check>& cs, const std::string& name) {
  for (const auto& c : cs) {
    if (c.name == name) return c;
  }
  FAIL("missing check " << name);
  return cs.front();
}

}  // namespace

TEST_CASE("cubes") {
  const DyadicCube c = cube(2, {1, 3});
  CHECK(c.measure() == Rat(1, 16));
  CHECK(c.lower(0) == Rat(1, 4));
  CHECK(c.upper(1) == Rat(1));
  CHECK(c.child(2) == cube(3, {2, 7}));
  CHECK(c.child(2).parent() == c);
  CHECK(DyadicCube::unit(2).contains(c));
  CHECK_FALSE(c.contains(c.parent()));
  CHECK(c.str() == "2:1,3");
}

TEST_CASE("points and their binary digits") {
  const CubePoint z = CubePoint::rational({Rat(1, 3), Rat(2, 3)});
  CHECK_FALSE(z.bit(0, 0));
  CHECK(z.bit(0, 1));
  CHECK(z.bit(1, 0));
  CHECK(z.cubeAt(2) == cube(2, {1, 2}));
  CHECK(z.in(cube(1, {0, 1})));
  const CubePoint half = CubePoint::rational({Rat(1, 2)});
  CHECK(errcOf([&] { half.bit(0, 0); }) == Errc::ambiguity);
  CHECK(half.in(cube(1, {0})));  // closed cubes
  CHECK(half.in(cube(1, {1})));
  // interleaved bits: z_0 = 0.10.., z_1 = 0.01..
  const CubePoint b = CubePoint::bits(2, BinWord::parse("1001"));
  CHECK(b.cubeAt(2) == cube(2, {2, 1}));
  CHECK(errcOf([&] { b.cubeAt(3); }) == Errc::insufficient_prefix);
}

TEST_CASE("cube set algebra is canonical") {
  const DyadicCubeSet a = DyadicCubeSet::of(1, {cube(1, {0}), cube(2, {2})});
  const DyadicCubeSet b = DyadicCubeSet::of(1, {cube(2, {1}), cube(2, {3})});
  CHECK(a.measure() == Rat(3, 4));
  CHECK(a.unite(b).isFull());
  CHECK(a.intersect(b) == DyadicCubeSet::of(cube(2, {1})));
  CHECK(a.subtract(b) == DyadicCubeSet::of(1, {cube(2, {0}), cube(2, {2})}));
  CHECK(a.maxLevel() == 2);
  CHECK(DyadicCubeSet::of(1, {cube(2, {0}), cube(2, {1})}).cubes() == std::vector<DyadicCube>{cube(1, {0})});
  CHECK(errcOf([&] { a.unite(DyadicCubeSet(2)); }) == Errc::dimension);
}

TEST_CASE("membership on faces") {
  const DyadicCubeSet s = DyadicCubeSet::of(cube(1, {0, 0}));
  CHECK(s.contains(CubePoint::rational({Rat(1, 3), Rat(1, 5)})));
  CHECK_FALSE(s.contains(CubePoint::rational({Rat(2, 3), Rat(1, 5)})));
  CHECK(errcOf([&] { s.contains(CubePoint::rational({Rat(1, 2), Rat(1, 5)})); }) == Errc::boundary);
  // a face between two cells that are both inside is not a boundary
  const DyadicCubeSet lower = DyadicCubeSet::of(2, {cube(1, {0, 0}), cube(1, {1, 0})});
  CHECK(lower.contains(CubePoint::rational({Rat(1, 2), Rat(1, 5)})));
}

TEST_CASE("dilation adds the touching cells") {
  const DyadicCubeSet s = DyadicCubeSet::of(cube(2, {1}));
  CHECK(s.dilate(2) == DyadicCubeSet::of(1, {cube(2, {0}), cube(2, {1}), cube(2, {2})}));
  CHECK(s.dilate(3).measure() == Rat(1, 4) + Rat(1, 4));
  CHECK(DyadicCubeSet::of(cube(1, {1, 1})).dilate(2).measure() == Rat(9, 16));
  CHECK_THROWS_AS(s.dilate(1), Error);
}

TEST_CASE("property: set algebra identities on random sets") {
  rnd::Rng g(71);
  for (int n = 0; n < 30; ++n) {
    const unsigned dim = static_cast<unsigned>(rnd::integer(g, 1, 3));
    const DyadicCubeSet a = rnd::cubeSet(g, dim, 4, 5), b = rnd::cubeSet(g, dim, 4, 5);
    CHECK(a.unite(b).measure() + a.intersect(b).measure() == a.measure() + b.measure());
    CHECK(a.subtract(b).unite(a.intersect(b)) == a);
    CHECK(a.subtract(b).intersect(b).isEmpty());
    CHECK(DyadicCubeSet::of(dim, a.cubes()) == a);
    CHECK(CubeStepFn::indicator(a).integral() == a.measure());
    CHECK(CubeStepFn::indicator(a).integralOver(b) == a.intersect(b).measure());
  }
}

TEST_CASE("cube step functions") {
  const PiecewiseFn f = PiecewiseFn::step({Rat(0), Rat(1, 4), Rat(1)}, {Rat(2), Rat(-1)});
  const CubeStepFn c = CubeStepFn::fromPiecewise(f);
  CHECK(c.integral() == Rat(1, 2) - Rat(3, 4));
  CHECK(c.abs().integral() == Rat(5, 4));
  CHECK(c.integralAbsPow(Rat(2)) == Rat(1) + Rat(3, 4));
  CHECK(c.supAbs() == Rat(2));
  CHECK(c(CubePoint::rational({Rat(1, 8)})) == Rat(2));
  CHECK(errcOf([&] { c(CubePoint::rational({Rat(1, 4)})); }) == Errc::boundary);
  CHECK(c.toPiecewise() == f);
  CHECK((c + c.scaled(Rat(-1))).supAbs() == Rat(0));
  CHECK(errcOf([&] { c.integralAbsPow(Rat(1, 2)); }) == Errc::inexact_power);
  CHECK(errcOf([] { CubeStepFn::fromPiecewise(PiecewiseFn::ramp(Rat(1))); }) == Errc::unsupported_class);
}

TEST_CASE("enumerations and their moduli") {
  const Sigma01Enum v = Sigma01Enum::fromIncrements(1, {{cube(1, {0})}, {cube(2, {2})}, {cube(3, {6})}});
  CHECK(v.lastStage() == 2);
  CHECK(v.limitMeasure() == Rat(7, 8));
  CHECK(v.at(9) == v.limit());
  CHECK(v.modulus(Rat(1)) == 0);
  CHECK(v.modulus(Rat(3, 8)) == 1);
  CHECK(v.modulus(Rat(1, 8)) == 2);
  CHECK(errcOf([&] { v.modulus(Rat(0)); }) == Errc::parameter);
  CHECK(errcOf([] { Sigma01Enum({DyadicCubeSet::full(1), DyadicCubeSet(1)}); }) == Errc::staging);
}

TEST_CASE("point tests shrink around the point") {
  const CubePoint z = CubePoint::rational({Rat(1, 3), Rat(1, 3)});
  const SchnorrTest v = pointTest(z);
  for (unsigned m = 0; m <= 6; ++m) {
    CHECK(v.member(m).limitMeasure() <= Rat::pow2(-static_cast<long>(m)));
    CHECK(v.member(m).limit().contains(z));
  }
  const SchnorrTest staged = stagedPointTest(z);
  CHECK(staged.member(3).lastStage() == 3);
  CHECK(staged.member(3).limit() == v.member(3).limit());
  CHECK(refinementIndex(2, cube(1, {0}), 0) == 4);
  CHECK(refinementIndex(2, cube(1, {0}), 7) == 7);
}

TEST_CASE("refined test at a one-dimensional point") {
  const CubePoint z = CubePoint::rational({Rat(1, 3)});
  const RefinedTest g = refineTest(pointTest(z), 5, 64);
  CHECK_FALSE(g.partial);
  REQUIRE(g.levels.size() == 6);
  CHECK(g.levels[0].limit().isFull());
  for (unsigned m = 1; m <= 5; ++m) {
    CHECK(g.levels[m].limit().measure() <= Rat::pow2(-static_cast<long>(m)));
    CHECK(g.levels[m].limit().subtract(g.levels[m - 1].limit()).isEmpty());
    const auto c = cubeContaining(g, m, z);
    REQUIRE(c.has_value());
    REQUIRE(c->parent.has_value());
    CHECK(g.levels[m - 1].cubes[*c->parent].cube.contains(c->cube));
  }
  // the partial sum at z is 1 for even m and 0 for odd m
  for (unsigned m = 0; m <= 5; ++m) CHECK(gPartialEval(g, z, m) == Rat(m % 2 == 0 ? 1 : 0));
  CHECK(gPartialFn(g, 5)(z) == Rat(0));
  CHECK(errcOf([&] { cubeAverage(g, DyadicCube::unit(1), 6); }) == Errc::depth);

  const auto checks = verifyRefined(g, z);
  for (const char* name : {"measure-bound", "cubes-disjoint", "nested-provenance", "average-partial-sum-limits",
                           "tail-l1-bound"}) {
    INFO(name);
    CHECK(find(checks, name).pass);
  }
  CHECK_FALSE(find(checks, "average-alternation").pass);
}

TEST_CASE("moduli for the refined levels are certified") {
  const CubePoint z = CubePoint::rational({Rat(1, 3)});
  const RefinedTest g = refineTest(stagedPointTest(z), 4, 64);
  for (unsigned m = 0; m <= 4; ++m) {
    for (const Rat& eps : {Rat(1, 2), Rat(1, 16)}) {
      const GModulus mod = modulusForG(g, m, eps);
      CHECK(mod.certified);
      CHECK(mod.residual == g.levels[m].limit().measure() - g.levels[m].at(mod.t).measure());
      CHECK(mod.residual < Rat(2) * eps);
    }
  }
  CHECK(errcOf([&] { modulusForG(g, 5, Rat(1)); }) == Errc::contract);
}

TEST_CASE("exact power comparison") {
  CHECK(lessThanPow(Rat(1, 5), Rat(1, 2), Rat(2)));
  CHECK_FALSE(lessThanPow(Rat(1, 4), Rat(1, 2), Rat(2)));
  CHECK(lessThanPow(Rat(1, 2), Rat(1, 2), Rat(1, 2)));     // 1/2 < sqrt(1/2)
  CHECK_FALSE(lessThanPow(Rat(3, 4), Rat(1, 2), Rat(1, 2)));
  CHECK(lessThanPow(Rat(0), Rat(1, 9), Rat(3, 2)));
}

TEST_CASE("characteristic approximants") {
  const Sigma01Enum v = Sigma01Enum::fromIncrements(1, {{cube(2, {1})}, {cube(3, {6})}});
  const CharApprox a = charApprox(v, Rat(1, 4), Rat(1));
  CHECK(a.certified);
  CHECK(a.stage == 1);  // stage 0 misses 1/8 >= 1/8
  CHECK(a.enumerationGap == Rat(0));
  CHECK(a.rampBound < Rat(1, 8));
  CHECK(a({Rat(3, 8)}) == Rat(1));
  CHECK(a({Rat(0)}) == Rat(0));
  CHECK(a.squaredDistance({Rat(0)}) == Rat(1, 16));
  CHECK(errcOf([&] { charApprox(v, Rat(0), Rat(1)); }) == Errc::parameter);
  CHECK(errcOf([&] { charApprox(v, Rat(1), Rat(1, 2)); }) == Errc::parameter);

  const Sigma01Enum sq = Sigma01Enum::constant(DyadicCubeSet::of(cube(1, {0, 0})));
  const CharApprox b = charApprox(sq, Rat(1, 2), Rat(2));
  CHECK(b.certified);
  // distance sqrt(2)/N is irrational at the diagonal corner neighbour
  const Rat off = Rat(1, 2) + Rat(1) / b.n();
  CHECK(errcOf([&] { b({off, off}); }) == Errc::inexact_power);
}

TEST_CASE("Lp norms of step functions") {
  const PiecewiseFn f = PiecewiseFn::step({Rat(0), Rat(1, 2), Rat(1)}, {Rat(3), Rat(-1)});
  CHECK(lpNorm(f, Rat(1)).norm == Rat(2));
  const LpNorm two = lpNorm(f, Rat(2));
  CHECK(two.powerIntegral == Rat(5));
  CHECK_FALSE(two.norm.has_value());
  CHECK(lpNorm(CubeStepFn::fromPiecewise(f), Rat(2)).powerIntegral == Rat(5));
  CHECK(errcOf([&] { lpNorm(PiecewiseFn::ramp(Rat(1)), Rat(1)); }) == Errc::unsupported_class);
  CHECK(errcOf([&] { lpNorm(f, Rat(1, 2)); }) == Errc::parameter);
}

TEST_CASE("property: the L1-to-Lp chain on random bounded pairs") {
  rnd::Rng g(72);
  for (int n = 0; n < 25; ++n) {
    const unsigned dim = static_cast<unsigned>(rnd::integer(g, 1, 2));
    const CubeStepFn a = rnd::cubeStepFn(g, dim, 3, 3, Rat(1));
    const CubeStepFn b = rnd::cubeStepFn(g, dim, 3, 3, Rat(1));
    for (unsigned p = 1; p <= 3; ++p) {
      for (const auto& c : fact26Check(a, b, Rat(1), Rat(1, 2), p)) {
        if (c.name == "premise") continue;
        INFO(c.name << ": " << c.detail);
        CHECK(c.pass);
      }
    }
  }
}
