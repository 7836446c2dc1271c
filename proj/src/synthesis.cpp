#include "lipx/synthesis.hpp"

#include <algorithm>
#include <sstream>

#include "lipx/error.hpp"
#include "lipx/kernels.hpp"

namespace lipx {

namespace {

Rat p2(long e) { return Rat::pow2(e); }

std::string levelWord(unsigned level, std::size_t i) { return "'" + BinWord::fromIndex(level, i).str() + "'"; }

}  // namespace

// ---------------------------------------------------------------- zigzags

void validate(const ZigzagSpec& z) {
  for (const Rat* v : {&z.p, &z.q}) {
    if (!v->isDyadic() || *v < Rat(0) || *v > Rat(1)) {
      throw Error(Errc::spec, "zigzag endpoint " + v->str() + " is not a dyadic rational in [0,1]");
    }
  }
  if (z.q < z.p) throw Error(Errc::spec, "zigzag needs p <= q");
  const unsigned long n = std::max(z.p.dyadicExponent(), z.q.dyadicExponent());
  if (z.k <= n) {
    throw Error(Errc::spec, "zigzag k = " + std::to_string(z.k) + " must exceed the endpoint exponent " +
                                std::to_string(n));
  }
  if (z.k > kMaxTableDepth) throw Error(Errc::spec, "zigzag k = " + std::to_string(z.k) + " is too fine");
}

Rat zigzagEval(const ZigzagSpec& z, const Rat& x) {
  validate(z);
  if (x < Rat(0) || x > Rat(1)) throw Error(Errc::range, x.str() + " is outside [0,1]");
  if (x <= z.p || x >= z.q) return Rat(0);
  // distance to the nearest multiple of the tooth width, measured from p
  const Rat period = p2(-static_cast<long>(z.k));
  const Rat u = (x - z.p) / period;
  const Rat frac = (u - Rat(u.floor())) * period;
  return min(frac, period - frac);
}

namespace {

// Appends the teeth of z after the breakpoint p, which must already be last.
void appendTeeth(const ZigzagSpec& z, std::vector<Rat>& b, std::vector<Rat>& v) {
  const Rat h = p2(-static_cast<long>(z.k) - 1);
  const std::size_t legs = ((z.q - z.p) / h).num().get_ui();
  for (std::size_t m = 1; m <= legs; ++m) {
    b.push_back(z.p + Rat(static_cast<long>(m)) * h);
    v.push_back(m % 2 ? h : Rat(0));
  }
}

}  // namespace

PiecewiseFn zigzagFn(const ZigzagSpec& z) {
  validate(z);
  std::vector<Rat> b{Rat(0)}, v{Rat(0)};
  if (z.p > Rat(0)) b.push_back(z.p), v.push_back(Rat(0));
  appendTeeth(z, b, v);
  if (b.back() < Rat(1)) b.push_back(Rat(1)), v.push_back(Rat(0));
  return PiecewiseFn::linear(std::move(b), std::move(v));
}

PiecewiseFn fact31Build(const std::vector<Rat>& alphas) {
  Rat prev(0);
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    const Rat& a = alphas[i];
    if (!a.isDyadic() || a < Rat(0) || a > Rat(1)) {
      throw Error(Errc::schedule, "stage " + std::to_string(i) + ": " + a.str() + " is not a dyadic rational in [0,1]");
    }
    if (a < prev) throw Error(Errc::schedule, "stage " + std::to_string(i) + ": sequence decreases");
    if (a.dyadicExponent() > i) {
      throw Error(Errc::schedule, "stage " + std::to_string(i) + ": " + a.str() + " needs denominator at most 2^" +
                                      std::to_string(i));
    }
    prev = a;
  }
  std::vector<Rat> b{Rat(0)}, v{Rat(0)};
  prev = Rat(0);
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    if (prev < alphas[i]) {
      const ZigzagSpec z{prev, alphas[i], static_cast<unsigned>(i + 1)};
      validate(z);
      appendTeeth(z, b, v);
    }
    prev = alphas[i];
  }
  if (b.back() < Rat(1)) b.push_back(Rat(1)), v.push_back(Rat(0));
  return PiecewiseFn::linear(std::move(b), std::move(v));
}

// -------------------------------------------------------- signed synthesis

Lemma33Result lemma33Build(const StagedMartingale& sm, unsigned targetDepth, unsigned levelCap,
                           const std::vector<unsigned>& gates) {
  if (targetDepth > sm.depth()) {
    throw Error(Errc::contract, "target depth " + std::to_string(targetDepth) + " exceeds staged depth " +
                                    std::to_string(sm.depth()));
  }
  const bool gated = !gates.empty();
  TreeTable l(targetDepth);
  Lemma33Result r;
  r.schedule.levels = {0};
  r.schedule.gate = gates;
  r.stageOfLevel = {0};
  r.trace.resize(TreeTable::offset(targetDepth));
  std::size_t s = 0;

  for (unsigned lev = 0; lev < targetDepth; ++lev) {
    const MartingaleTable& m = sm.stage(s);
    const auto parents = l.level(lev);
    auto children = l.level(lev + 1);
    const auto mParents = m.level(lev);
    const auto mChildren = m.level(lev + 1);
    NodeTrace* trace = r.trace.data() + TreeTable::offset(lev);

    kernels::forEachIndex(parents.size(), [&](std::size_t i) {
      const Rat& lp = parents[i];
      const Rat& m0 = mChildren[2 * i];
      const Rat& m1 = mChildren[2 * i + 1];
      const std::uint8_t a = m1 < m0 ? 1 : 0;
      const Rat& ma = a ? m1 : m0;
      const bool negative = lp.sign() < 0;
      Rat small = negative ? -ma : ma;
      Rat large = negative ? -ma + Rat(2) * (lp + ma) : ma + Rat(2) * (lp - ma);
      children[2 * i + a] = std::move(small);
      children[2 * i + 1 - a] = std::move(large);
      trace[i] = {a, static_cast<std::uint8_t>(negative),
                  static_cast<std::uint8_t>(lp == mParents[i] || lp == -mParents[i])};
    });
    r.stageOfLevel.push_back(s);
    r.builtDepth = lev + 1;

    if (gated && s + 1 >= gates.size()) continue;  // last gated stage runs to the end
    const unsigned base = r.schedule.levels.back();
    const unsigned span = lev + 1 - base;
    const std::vector<Rat> sums = kernels::blockAbsSums(children, std::size_t{1} << span);
    const auto mBase = m.level(base);
    Rat gap;
    for (std::size_t i = 0; i < sums.size(); ++i) gap = max(gap, mBase[i] - sums[i] * p2(-static_cast<long>(span)));
    const bool converged = gap <= p2(-static_cast<long>(s));
    if (converged && (!gated || lev + 1 >= gates[s + 1])) {
      r.boundaryGap.push_back(gap);
      r.schedule.levels.push_back(lev + 1);
      ++s;
    } else if (!converged && lev + 1 >= levelCap) {
      r.capExceeded = true;
      break;
    }
  }
  r.trace.resize(TreeTable::offset(r.builtDepth));
  r.table = SignedMartingaleTable(l.truncated(r.builtDepth));
  return r;
}

std::vector<Check> verifyLemma33(const StagedMartingale& sm, const Lemma33Result& r) {
  std::vector<Check> out;
  const SignedMartingaleTable& l = r.table;

  const auto bad = checkFairness(l);
  out.push_back({"fairness", bad.empty(), bad.empty() ? "0 violations" : std::to_string(bad.size()) + " violations"});

  {
    Check c{"abs-bound-by-active-stage", l.at(0, 0).isZero(), "L(empty) = " + l.at(0, 0).str()};
    for (unsigned lev = 1; lev <= r.builtDepth && c.pass; ++lev) {
      const auto row = l.level(lev);
      const auto mRow = sm.stage(r.stageOfLevel[lev]).level(lev);
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (row[i].abs() > mRow[i]) {
          c.pass = false;
          c.detail = "|L| = " + row[i].abs().str() + " > M_s = " + mRow[i].str() + " at " + levelWord(lev, i);
          break;
        }
      }
    }
    if (c.pass) c.detail = "all " + std::to_string(r.builtDepth) + " levels";
    out.push_back(c);
  }

  {
    Check c{"sign-lock", true, ""};
    std::size_t locked = 0;
    for (unsigned lev = 0; lev < r.builtDepth && c.pass; ++lev) {
      const MartingaleTable& m = sm.stage(r.stageOfLevel[lev + 1]);
      for (std::size_t i = 0; i < (std::size_t{1} << lev); ++i) {
        const Rat& lp = l.at(lev, i);
        const Rat& mp = m.at(lev, i);
        int sign = 0;
        if (lp == mp) sign = 1;
        else if (lp == -mp) sign = -1;
        if (sign == 0) continue;
        ++locked;
        for (std::size_t c2 = 2 * i; c2 < 2 * i + 2; ++c2) {
          if (l.at(lev + 1, c2) != Rat(sign) * m.at(lev + 1, c2)) {
            c.pass = false;
            c.detail = "locked parent " + levelWord(lev, i) + " has child " + levelWord(lev + 1, c2) + " = " +
                       l.at(lev + 1, c2).str() + ", expected " + (Rat(sign) * m.at(lev + 1, c2)).str();
          }
        }
      }
    }
    if (c.pass) c.detail = std::to_string(locked) + " locked parents propagate";
    out.push_back(c);
  }

  {
    Check c{"boundary-gaps", true, ""};
    const auto& lv = r.schedule.levels;
    for (std::size_t s = 0; s + 1 < lv.size() && c.pass; ++s) {
      const MartingaleTable& m = sm.stage(s);
      const Rat tol = p2(-static_cast<long>(s));
      for (std::size_t i = 0; i < (std::size_t{1} << lv[s]); ++i) {
        const BinWord w = BinWord::fromIndex(lv[s], i);
        const Rat gap = m(w) - levelVariation(l, w, lv[s + 1]);
        if (gap.sign() < 0 || gap > tol) {
          c.pass = false;
          c.detail = "stage " + std::to_string(s) + " at '" + w.str() + "': gap " + gap.str() + " outside [0, " +
                     tol.str() + "]";
          break;
        }
      }
    }
    if (c.pass) c.detail = std::to_string(lv.size() - 1) + " completed boundaries";
    out.push_back(c);
  }
  return out;
}

// ------------------------------------------------------ Lipschitz preimage

namespace {

PiecewiseFn gFromSigned(const SignedMartingaleTable& l) {
  const unsigned n = l.depth();
  std::vector<Rat> nodes = kernels::exclusiveScan(l.level(n));
  const Rat h = p2(-static_cast<long>(n));
  kernels::forEachIndex(nodes.size(), [&](std::size_t i) { nodes[i] *= h; });
  return PiecewiseFn::onUniformGrid(n, std::move(nodes));
}

}  // namespace

Thm34Result thm34Build(const IntervalREOracle& f, unsigned depth, std::size_t stages, unsigned levelCap) {
  if (!f.lipschitz()) throw Error(Errc::contract, "oracle '" + f.description() + "' declares no Lipschitz bound");
  StagedMartingale staged = oracleToStaged(f, depth, stages);
  Lemma33Result lemma = lemma33Build(staged, depth, levelCap);
  PiecewiseFn g = gFromSigned(lemma.table);
  return {std::move(lemma), std::move(staged), *f.lipschitz(), std::move(g)};
}

std::vector<Check> verifyThm34(const Thm34Result& r) {
  std::vector<Check> out;
  const unsigned n = r.lemma.builtDepth;
  const auto& nodes = r.g.values();
  const Rat h = p2(-static_cast<long>(n));

  {
    // Same-level dyadic pairs reduce to neighbours on the finest grid.
    Check c{"lipschitz-dyadic", true, "constant " + r.lipschitz.str()};
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
      if ((nodes[i + 1] - nodes[i]).abs() > r.lipschitz * h) {
        c.pass = false;
        c.detail = "step " + (nodes[i + 1] - nodes[i]).str() + " at cell " + std::to_string(i);
        break;
      }
    }
    out.push_back(c);
  }

  {
    const std::size_t completed = r.lemma.schedule.levels.size() - 1;
    Check c{"variation-matches-final-stage", true, ""};
    if (completed < r.staged.stageCount()) {
      c.pass = false;
      c.detail = "only " + std::to_string(completed) + " of " + std::to_string(r.staged.stageCount()) +
                 " stages completed by depth " + std::to_string(n);
    } else {
      const std::size_t sLast = completed - 1;
      const Rat tol = p2(-static_cast<long>(sLast));
      std::vector<Rat> absL(std::size_t{1} << n);
      const auto row = r.lemma.table.level(n);
      for (std::size_t i = 0; i < absL.size(); ++i) absL[i] = row[i].abs();
      const std::vector<Rat> var = kernels::exclusiveScan(absL);
      const std::vector<Rat> fin = kernels::exclusiveScan(r.staged.stages().back().level(n));
      Rat worst;
      for (std::size_t i = 1; i < var.size(); ++i) {
        const Rat diff = (fin[i] - var[i]) * h;
        if (diff.sign() < 0 || diff > tol) {
          c.pass = false;
          c.detail = "x = " + (Rat(static_cast<long>(i)) * h).str() + ": f - V = " + diff.str();
          break;
        }
        worst = max(worst, diff);
      }
      if (c.pass) c.detail = "max f - V = " + worst.str() + " <= 2^-" + std::to_string(sLast);
    }
    out.push_back(c);
  }
  return out;
}

// ---------------------------------------------------------------- gating

std::optional<unsigned> atomLevel(const MartingaleTable& m, std::size_t s, unsigned cap) {
  const unsigned top = std::min(cap, m.depth());
  for (unsigned k = 0; k <= top; ++k) {
    const Rat limit = p2(static_cast<long>(k) - static_cast<long>(s));
    const auto row = m.level(k);
    if (std::all_of(row.begin(), row.end(), [&](const Rat& v) { return v <= limit; })) return k;
  }
  return std::nullopt;
}

RuteSchedule ruteSchedule(const StagedMartingale& sm, unsigned depthCap) {
  std::size_t leadingZeros = 0;
  for (const auto& m : sm.stages()) {
    if (leadingZeros >= 2 || !m.at(0, 0).isZero()) break;
    ++leadingZeros;
  }
  RuteSchedule r;
  r.zerosPrepended = 2 - std::min<std::size_t>(2, leadingZeros);
  r.staged = sm.withLeadingZeros(r.zerosPrepended);
  const std::size_t count = r.staged.stageCount();
  for (std::size_t s = 0; s <= count; ++s) {
    const auto k = atomLevel(r.staged.stage(s), s, depthCap);
    if (!k) {
      throw Error(Errc::non_atomic_witness_missing,
                  "stage " + std::to_string(s) + " keeps a cylinder above 2^-" + std::to_string(s) +
                      " down to level " + std::to_string(std::min(depthCap, r.staged.depth())));
    }
    r.k.push_back(*k);
  }
  for (std::size_t s = 0; s < count; ++s) r.gate.push_back(std::max(r.k[s + 1], s ? r.gate[s - 1] : 0u));
  return r;
}

RuteResult ruteBuild(const StagedMartingale& sm, unsigned targetDepth, unsigned depthCap) {
  RuteSchedule sched = ruteSchedule(sm, depthCap);
  Lemma33Result lemma = lemma33Build(sched.staged, targetDepth, std::max(depthCap, targetDepth), sched.gate);
  lemma.schedule.k = sched.k;
  PiecewiseFn g = gFromSigned(lemma.table);
  return {std::move(sched), std::move(lemma), std::move(g)};
}

std::vector<Check> verifyRute(const RuteResult& r) {
  std::vector<Check> out;
  const auto& lv = r.lemma.schedule.levels;
  const SignedMartingaleTable& l = r.lemma.table;
  const unsigned n = r.lemma.builtDepth;

  {
    Check c{"gates-respected", true, ""};
    for (std::size_t s = 1; s < lv.size(); ++s) {
      if (lv[s] < r.schedule.k[s + 1] || lv[s] < r.schedule.gate[s]) {
        c.pass = false;
        c.detail = "stage " + std::to_string(s) + " starts at level " + std::to_string(lv[s]) + " before k = " +
                   std::to_string(r.schedule.k[s + 1]);
      }
    }
    if (c.pass) c.detail = std::to_string(lv.size()) + " stages started";
    out.push_back(c);
  }

  {
    Check c{"band-bound", true, ""};
    std::size_t s = 0;
    for (unsigned lev = 0; lev <= n && c.pass; ++lev) {
      while (s + 1 < lv.size() && lv[s + 1] <= lev) ++s;
      const Rat bound = p2(-static_cast<long>(s) - 1);
      const Rat w = p2(-static_cast<long>(lev));
      const auto row = l.level(lev);
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (row[i].abs() * w > bound) {
          c.pass = false;
          c.detail = "band " + std::to_string(s) + " at " + levelWord(lev, i) + ": " + (row[i].abs() * w).str() +
                     " > " + bound.str();
          break;
        }
      }
    }
    if (c.pass) c.detail = "levels 0.." + std::to_string(n);
    out.push_back(c);
  }

  {
    // |g(a) - g(0.sigma)| = |nu[0.sigma, a)| for a on the finest grid.
    Check c{"dyadic-enclosure", true, ""};
    const std::vector<Rat> prefix = kernels::exclusiveScan(l.level(n));
    const Rat h = p2(-static_cast<long>(n));
    for (std::size_t s = 0; s < lv.size() && c.pass; ++s) {
      const unsigned j = lv[s];
      if (j > n) break;
      const std::size_t block = std::size_t{1} << (n - j);
      const Rat tol = p2(-static_cast<long>(s));
      for (std::size_t start = 0; start < prefix.size() - 1 && c.pass; start += block) {
        for (std::size_t t = start; t <= start + block; ++t) {
          const Rat diff = ((prefix[t] - prefix[start]) * h).abs();
          if (diff > tol) {
            c.pass = false;
            c.detail = "stage " + std::to_string(s) + ": |nu| = " + diff.str() + " > " + tol.str();
            break;
          }
        }
      }
    }
    if (c.pass) c.detail = std::to_string(lv.size()) + " stage levels";
    out.push_back(c);
  }
  return out;
}

}  // namespace lipx
