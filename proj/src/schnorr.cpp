#include "lipx/schnorr.hpp"

#include <algorithm>
#include <map>
#include <mutex>

#include "lipx/error.hpp"

namespace lipx {

// ----------------------------------------------------------- enumerations

Sigma01Enum::Sigma01Enum(std::vector<DyadicCubeSet> cumulative) : stages_(std::move(cumulative)) {
  if (stages_.empty()) throw Error(Errc::staging, "an enumeration needs at least one stage");
  for (std::size_t t = 1; t < stages_.size(); ++t) {
    if (stages_[t].dim() != stages_[0].dim()) throw Error(Errc::dimension, "stages differ in dimension");
    if (!stages_[t - 1].subtract(stages_[t]).isEmpty()) {
      throw Error(Errc::staging, "stage " + std::to_string(t) + " loses part of stage " + std::to_string(t - 1));
    }
  }
}

Sigma01Enum Sigma01Enum::fromIncrements(unsigned dim, const std::vector<std::vector<DyadicCube>>& newCubes) {
  std::vector<DyadicCubeSet> cum;
  DyadicCubeSet acc(dim);
  for (const auto& batch : newCubes) {
    acc = acc.unite(DyadicCubeSet::of(dim, batch));
    cum.push_back(acc);
  }
  if (cum.empty()) cum.push_back(acc);
  return Sigma01Enum(std::move(cum));
}

std::size_t Sigma01Enum::modulus(const Rat& eps) const {
  if (eps.sign() <= 0) throw Error(Errc::parameter, "modulus needs eps > 0");
  const Rat total = limitMeasure();
  for (std::size_t t = 0; t < stages_.size(); ++t) {
    if (total - stages_[t].measure() < eps) return t;
  }
  return lastStage();
}

struct SchnorrTest::Impl {
  unsigned dim;
  Generator gen;
  std::string description;
  std::mutex mu;
  std::map<unsigned, std::unique_ptr<const Sigma01Enum>> cache;
};

SchnorrTest::SchnorrTest(unsigned dim, Generator gen, std::string description)
    : impl_(std::make_shared<Impl>()) {
  if (dim == 0 || dim > kMaxDim) throw Error(Errc::dimension, "unsupported dimension " + std::to_string(dim));
  impl_->dim = dim;
  impl_->gen = std::move(gen);
  impl_->description = std::move(description);
}

unsigned SchnorrTest::dim() const noexcept { return impl_->dim; }
const std::string& SchnorrTest::description() const noexcept { return impl_->description; }

const Sigma01Enum& SchnorrTest::member(unsigned m) const {
  std::lock_guard lock(impl_->mu);
  auto it = impl_->cache.find(m);
  if (it == impl_->cache.end()) {
    auto v = std::make_unique<const Sigma01Enum>(impl_->gen(m));
    if (v->dim() != impl_->dim) throw Error(Errc::dimension, "member has the wrong dimension");
    it = impl_->cache.emplace(m, std::move(v)).first;
  }
  return *it->second;
}

namespace {

unsigned pointLevel(unsigned m, unsigned n) { return (m + n - 1) / n; }

}  // namespace

SchnorrTest pointTest(const CubePoint& z) {
  const unsigned n = z.dim();
  return SchnorrTest(
      n, [z, n](unsigned m) { return Sigma01Enum::constant(DyadicCubeSet::of(z.cubeAt(pointLevel(m, n)))); },
      "point");
}

SchnorrTest stagedPointTest(const CubePoint& z) {
  const unsigned n = z.dim();
  return SchnorrTest(
      n,
      [z, n](unsigned m) {
        const DyadicCube c = z.cubeAt(pointLevel(m, n));
        std::vector<std::vector<DyadicCube>> inc;
        for (unsigned i = 0; i < (1u << n); ++i) inc.push_back({c.child(i)});
        return Sigma01Enum::fromIncrements(n, inc);
      },
      "staged-point");
}

// --------------------------------------------------------------- refining

unsigned refinementIndex(unsigned m, const DyadicCube& c, std::size_t stage) {
  return std::max(static_cast<unsigned>(stage), m + 1 + c.dim() * c.level);
}

RefinedTest refineTest(const SchnorrTest& v, unsigned mMax, std::size_t stageBudget) {
  if (stageBudget == 0) throw Error(Errc::parameter, "stage budget must be positive");
  const unsigned n = v.dim();
  const std::size_t last = stageBudget - 1;

  RefinedTest out{v, {}, last, false};
  GLevel g0;
  g0.cubes.push_back({DyadicCube::unit(n), 0, refinementIndex(0, DyadicCube::unit(n), 0), std::nullopt});
  g0.stages.assign(last + 1, DyadicCubeSet::full(n));
  out.levels.push_back(std::move(g0));

  for (unsigned m = 0; m < mMax; ++m) {
    const GLevel& prev = out.levels[m];
    GLevel next;
    DyadicCubeSet acc(n);
    for (std::size_t t = 0; t <= last; ++t) {
      for (std::size_t i = 0; i < prev.cubes.size(); ++i) {
        const GCube& c = prev.cubes[i];
        if (c.stage > t) continue;
        const Sigma01Enum& vr = v.member(c.r);
        if (vr.lastStage() > last) out.partial = true;
        if (t != c.stage && t > vr.lastStage()) continue;  // V_r did not change
        const DyadicCubeSet fresh = vr.at(t).intersect(DyadicCubeSet::of(c.cube)).subtract(acc);
        for (const DyadicCube& k : fresh.cubes()) next.cubes.push_back({k, t, refinementIndex(m + 1, k, t), i});
        acc = acc.unite(fresh);
      }
      next.stages.push_back(acc);
    }
    out.levels.push_back(std::move(next));
  }
  return out;
}

GModulus modulusForG(const RefinedTest& g, unsigned m, const Rat& eps) {
  if (m >= g.levels.size()) {
    throw Error(Errc::contract, "G_" + std::to_string(m) + " has no provenance (built to " +
                                    std::to_string(g.levels.size() - 1) + ")");
  }
  if (eps.sign() <= 0) throw Error(Errc::parameter, "modulus needs eps > 0");
  GModulus r;
  r.bound = eps * Rat(2);
  if (m > 0) {
    r.s = modulusForG(g, m - 1, eps / Rat(2)).t;
    const GLevel& prev = g.levels[m - 1];
    std::vector<const GCube*> early;
    for (const auto& c : prev.cubes) {
      if (c.stage <= r.s) early.push_back(&c);
    }
    r.cubesBefore = early.size();
    r.t = r.s;
    if (!early.empty()) {
      r.perCubeEps = eps / Rat(2 * static_cast<long>(early.size()));
      for (const GCube* c : early) r.t = std::max(r.t, g.source.modulus(c->r, r.perCubeEps));
    }
  }
  const GLevel& lv = g.levels[m];
  r.residual = lv.limit().measure() - lv.at(r.t).measure();
  r.certified = r.residual < r.bound;
  return r;
}

Rat gPartialEval(const RefinedTest& g, const CubePoint& x, unsigned m) {
  if (m >= g.levels.size()) throw Error(Errc::depth, "G_" + std::to_string(m) + " not built");
  Rat s;
  for (unsigned i = 0; i <= m; ++i) {
    if (g.levels[i].limit().contains(x)) s += Rat(i % 2 ? -1 : 1);
  }
  return s;
}

CubeStepFn tailFn(const RefinedTest& g, unsigned r, unsigned m) {
  if (m >= g.levels.size()) throw Error(Errc::depth, "G_" + std::to_string(m) + " not built");
  CubeStepFn f(g.dim());
  for (unsigned i = r; i <= m; ++i) f = f + CubeStepFn::indicator(g.levels[i].limit(), Rat(i % 2 ? -1 : 1));
  return f;
}

CubeStepFn gPartialFn(const RefinedTest& g, unsigned m) { return tailFn(g, 0, m); }

Rat cubeAverage(const RefinedTest& g, const DyadicCube& c, unsigned m) {
  if (m >= g.levels.size()) throw Error(Errc::depth, "G_" + std::to_string(m) + " not built");
  if (c.dim() != g.dim()) throw Error(Errc::dimension, "cube dimension differs from the test");
  const DyadicCubeSet cs = DyadicCubeSet::of(c);
  Rat s;
  for (unsigned i = 0; i <= m; ++i) {
    const Rat part = g.levels[i].limit().intersect(cs).measure();
    s += i % 2 ? -part : part;
  }
  return s / c.measure();
}

std::optional<GCube> cubeContaining(const RefinedTest& g, unsigned m, const CubePoint& z) {
  if (m >= g.levels.size()) throw Error(Errc::depth, "G_" + std::to_string(m) + " not built");
  std::optional<GCube> hit;
  for (const auto& c : g.levels[m].cubes) {
    if (!z.in(c.cube)) continue;
    if (hit) throw Error(Errc::ambiguity, "point lies on the boundary of two cubes of G_" + std::to_string(m));
    hit = c;
  }
  return hit;
}

std::vector<Check> verifyRefined(const RefinedTest& g, const CubePoint& z) {
  std::vector<Check> out;
  const unsigned mMax = static_cast<unsigned>(g.levels.size() - 1);

  {
    Check c{"measure-bound", true, ""};
    Rat worst(-1);
    for (unsigned m = 0; m <= mMax; ++m) {
      for (std::size_t t = 0; t < g.levels[m].stages.size(); ++t) {
        const Rat slack = g.levels[m].stages[t].measure() - Rat::pow2(-static_cast<long>(m));
        worst = max(worst, slack);
        if (slack.sign() > 0 && c.pass) {
          c.pass = false;
          c.detail = "G_" + std::to_string(m) + " at stage " + std::to_string(t) + " exceeds 2^-m by " + slack.str();
        }
      }
    }
    if (c.pass) c.detail = "max lambda(G_m,t) - 2^-m = " + worst.str();
    out.push_back(c);
  }

  {
    Check c{"cubes-disjoint", true, ""};
    for (unsigned m = 0; m <= mMax && c.pass; ++m) {
      Rat sum;
      for (const auto& k : g.levels[m].cubes) sum += k.cube.measure();
      if (sum != g.levels[m].limit().measure()) {
        c.pass = false;
        c.detail = "cubes of G_" + std::to_string(m) + " overlap";
      }
    }
    out.push_back(c);
  }

  std::vector<GCube> chain;
  {
    Check c{"nested-provenance", true, ""};
    std::optional<std::size_t> prevIndex;
    for (unsigned m = 0; m <= mMax && c.pass; ++m) {
      const auto hit = cubeContaining(g, m, z);
      if (!hit) {
        c.pass = false;
        c.detail = "no cube of G_" + std::to_string(m) + " contains z";
        break;
      }
      if (m > 0 && (!chain.back().cube.contains(hit->cube) || hit->parent != prevIndex)) {
        c.pass = false;
        c.detail = "C_" + std::to_string(m) + " is not inside C_" + std::to_string(m - 1);
      }
      const auto& cubes = g.levels[m].cubes;
      for (std::size_t i = 0; i < cubes.size(); ++i) {
        if (cubes[i].cube == hit->cube && cubes[i].stage == hit->stage) prevIndex = i;
      }
      chain.push_back(*hit);
    }
    if (c.pass) c.detail = "C_0..C_" + std::to_string(mMax) + " nested around z";
    out.push_back(c);
  }

  {
    Check c{"average-alternation", chain.size() == mMax + 1, ""};
    for (unsigned m = 0; m < chain.size(); ++m) {
      const Rat avg = cubeAverage(g, chain[m].cube, mMax);
      const Rat tol = Rat::pow2(1 - static_cast<long>(m));
      const bool ok = m % 2 == 0 ? avg >= Rat(1) - tol : avg <= Rat(-1) + tol;
      c.detail += (m ? " " : "") + std::to_string(m) + ":" + avg.str();
      if (!ok) c.pass = false;
    }
    out.push_back(c);
  }

  // On C_m the first m+1 terms sum to 1 for even m and to 0 for odd m, so
  // the averages approach 1 and 0, both within the tail bound 2^-(m-1).
  {
    Check c{"average-partial-sum-limits", chain.size() == mMax + 1, ""};
    for (unsigned m = 0; m < chain.size(); ++m) {
      const Rat avg = cubeAverage(g, chain[m].cube, mMax);
      const Rat head(m % 2 == 0 ? 1 : 0);
      const Rat tol = Rat::pow2(1 - static_cast<long>(m));
      const bool ok = m % 2 == 0 ? (head - tol <= avg && avg <= head) : (head <= avg && avg <= head + tol);
      if (!ok && c.pass) {
        c.pass = false;
        c.detail = "m=" + std::to_string(m) + " average " + avg.str();
      }
    }
    if (c.pass) c.detail = "even m within 2^-(m-1) below 1, odd m within 2^-(m-1) above 0";
    out.push_back(c);
  }

  {
    Check c{"tail-l1-bound", true, ""};
    for (unsigned r = 0; r <= mMax; ++r) {
      for (unsigned m = r; m <= mMax; ++m) {
        const Rat norm = tailFn(g, r, m).abs().integral();
        if (norm > Rat::pow2(1 - static_cast<long>(r)) && c.pass) {
          c.pass = false;
          c.detail = "r=" + std::to_string(r) + " m=" + std::to_string(m) + " norm " + norm.str();
        }
      }
    }
    out.push_back(c);
  }
  return out;
}

// ------------------------------------------------ characteristic functions

bool lessThanPow(const Rat& x, const Rat& y, const Rat& p) {
  if (x.sign() < 0) return true;
  if (y.sign() <= 0 || p.sign() <= 0) throw Error(Errc::parameter, "lessThanPow needs y > 0 and p > 0");
  const unsigned long a = p.num().get_ui();
  const unsigned long b = p.den().get_ui();
  return powInt(x, b) < powInt(y, a);
}

Rat CharApprox::squaredDistance(const std::vector<Rat>& x) const {
  if (x.size() != core.dim()) throw Error(Errc::dimension, "point dimension differs");
  std::optional<Rat> best;
  for (const DyadicCube& c : core.cubes()) {
    Rat d2;
    for (unsigned j = 0; j < c.dim(); ++j) {
      const Rat gap = max(Rat(0), max(c.lower(j) - x[j], x[j] - c.upper(j)));
      d2 += gap * gap;
    }
    if (!best || d2 < *best) best = d2;
  }
  if (!best) throw Error(Errc::range, "distance to the empty set");
  return *best;
}

Rat CharApprox::operator()(const std::vector<Rat>& x) const {
  if (core.isEmpty()) return Rat(0);
  const Rat d = requireExactPow(squaredDistance(x), Rat(1, 2));
  return max(Rat(0), Rat(1) - n() * d);
}

namespace {

// Number of endpoints of the maximal intervals of a 1-D set lying in (0,1).
std::size_t interiorEndpoints(const DyadicCubeSet& s) {
  std::vector<std::pair<Rat, Rat>> runs;
  for (const DyadicCube& c : s.cubes()) {
    if (!runs.empty() && runs.back().second == c.lower(0)) {
      runs.back().second = c.upper(0);
    } else {
      runs.emplace_back(c.lower(0), c.upper(0));
    }
  }
  std::size_t e = 0;
  for (const auto& [lo, hi] : runs) e += (lo.sign() > 0) + (hi < Rat(1));
  return e;
}

}  // namespace

CharApprox charApprox(const Sigma01Enum& v, const Rat& eps, const Rat& p) {
  if (eps.sign() <= 0) throw Error(Errc::parameter, "eps must be positive");
  if (p < Rat(1)) throw Error(Errc::parameter, "p must be at least 1");
  CharApprox a;
  a.eps = eps;
  a.p = p;
  const Rat half = eps / Rat(2);
  const Rat total = v.limitMeasure();
  a.stage = v.lastStage();
  for (std::size_t t = 0; t <= v.lastStage(); ++t) {
    if (lessThanPow(total - v.at(t).measure(), half, p)) {
      a.stage = t;
      break;
    }
  }
  a.core = v.at(a.stage);
  a.enumerationGap = total - a.core.measure();

  if (a.core.isEmpty() || a.core.isFull()) {
    a.rampExact = true;
    a.certified = lessThanPow(a.enumerationGap, half, p);
    return a;
  }

  const unsigned base = a.core.maxLevel();
  if (a.core.dim() == 1 && p.isInteger()) {
    // Ramps of width 1/N at every interior endpoint; they cannot overlap once
    // N exceeds twice the finest level, and each integrates to 1/(N(p+1)).
    const std::size_t e = interiorEndpoints(a.core);
    for (unsigned j = base + 1; j <= kMaxCubeLevel; ++j) {
      const Rat ramp = Rat(static_cast<long>(e)) / (Rat::pow2(j) * (p + Rat(1)));
      if (lessThanPow(ramp, half, p)) {
        a.gridLevel = j;
        a.rampBound = ramp;
        a.rampExact = true;
        a.certified = lessThanPow(a.enumerationGap, half, p);
        return a;
      }
    }
  } else {
    for (unsigned j = base; j <= kMaxCubeLevel; ++j) {
      const Rat shell = a.core.dilate(j).subtract(a.core).measure();
      if (lessThanPow(shell, half, p)) {
        a.gridLevel = j;
        a.rampBound = shell;
        a.certified = lessThanPow(a.enumerationGap, half, p);
        return a;
      }
    }
  }
  throw Error(Errc::depth, "no grid up to level " + std::to_string(kMaxCubeLevel) + " certifies the approximation");
}

LpNorm lpNorm(const PiecewiseFn& f, const Rat& p) {
  if (p < Rat(1)) throw Error(Errc::parameter, "p must be at least 1");
  if (f.mode() != PieceMode::step) throw Error(Errc::unsupported_class, "L_p norms need a step function");
  LpNorm r{p, integralAbsPow(f, p), std::nullopt};
  r.norm = exactPow(r.powerIntegral, Rat(1) / p);
  return r;
}

LpNorm lpNorm(const CubeStepFn& f, const Rat& p) {
  if (p < Rat(1)) throw Error(Errc::parameter, "p must be at least 1");
  LpNorm r{p, f.integralAbsPow(p), std::nullopt};
  r.norm = exactPow(r.powerIntegral, Rat(1) / p);
  return r;
}

std::vector<Check> fact26Check(const CubeStepFn& g, const CubeStepFn& h, const Rat& bound, const Rat& eps,
                               unsigned p) {
  if (p == 0) throw Error(Errc::parameter, "p must be at least 1");
  if (bound < Rat(1)) throw Error(Errc::parameter, "the bound must be at least 1");
  if (eps.sign() <= 0 || eps > Rat(1)) throw Error(Errc::parameter, "eps must lie in (0,1]");
  if (g.dim() != h.dim()) throw Error(Errc::dimension, "functions differ in dimension");

  const CubeStepFn diff = (g + h.scaled(Rat(-1))).abs();
  const Rat twoC = bound * Rat(2);
  const Rat l1 = diff.integral();
  const Rat lp = diff.integralAbsPow(Rat(static_cast<long>(p)));
  const Rat epsP = powInt(eps, p);
  const Rat scaleP = powInt(twoC, p);

  const bool premise = l1 * powInt(twoC, p - 1) < epsP;
  const auto implied = [&](bool holds) { return !premise || holds; };

  std::vector<Check> out;
  out.push_back({"bounded", g.supAbs() <= bound && h.supAbs() <= bound, "sup|g|=" + g.supAbs().str() +
                                                                           " sup|h|=" + h.supAbs().str()});
  out.push_back({"premise", premise, "||g-h||_1=" + l1.str()});
  out.push_back({"alpha-at-most-one", diff.supAbs() <= twoC, "sup|g-h|/(2C)=" + (diff.supAbs() / twoC).str()});
  out.push_back({"power-below-linear", lp / scaleP <= l1 / twoC,
                 (lp / scaleP).str() + " <= " + (l1 / twoC).str()});
  out.push_back({"linear-below-target", implied(l1 / twoC < epsP / scaleP),
                 (l1 / twoC).str() + " < " + (epsP / scaleP).str()});
  out.push_back({"conclusion", implied(lp < epsP), "||g-h||_p^p=" + lp.str() + " eps^p=" + epsP.str()});
  return out;
}

}  // namespace lipx
