#include "lipx/oscillator.hpp"

#include <algorithm>

#include "lipx/error.hpp"
#include "lipx/kernels.hpp"

namespace lipx {

// --------------------------------------------------------------- strategies

Strategy Strategy::constant(const Rat& initial) {
  if (initial.sign() <= 0) throw Error(Errc::parameter, "initial capital must be positive");
  return Strategy(Kind::constant, {}, initial, "constant");
}

Strategy Strategy::pattern(BinWord bits, const Rat& initial) {
  if (initial.sign() <= 0) throw Error(Errc::parameter, "initial capital must be positive");
  if (bits.empty()) throw Error(Errc::parse, "pattern needs at least one bit");
  std::string name = "pattern:" + bits.str();
  return Strategy(Kind::pattern, std::move(bits), initial, std::move(name));
}

Strategy Strategy::parse(const std::string& name, const Rat& initial) {
  if (name == "constant") return constant(initial);
  if (name == "double-on-0" || name == "double-on-1") {
    Strategy s = pattern(BinWord::parse(name.substr(10)), initial);
    s.name_ = name;
    return s;
  }
  if (name.rfind("pattern:", 0) == 0) return pattern(BinWord::parse(name.substr(8)), initial);
  throw Error(Errc::parse, "unknown strategy '" + name + "'");
}

std::pair<Rat, Rat> Strategy::children(std::size_t depth, const Rat& capital) const {
  if (kind_ == Kind::constant) return {capital, capital};
  const bool predicted = bits_[depth % bits_.size()];
  return predicted ? std::pair<Rat, Rat>{Rat(0), capital * Rat(2)} : std::pair<Rat, Rat>{capital * Rat(2), Rat(0)};
}

std::pair<Rat, Rat> Strategy::children(const BinWord& sigma, const Rat& capital) const {
  return children(sigma.size(), capital);
}

MartingaleTable Strategy::tabulate(unsigned depth) const {
  TreeTable t(depth);
  t.at(0, 0) = initial_;
  for (unsigned l = 0; l < depth; ++l) {
    const auto parents = t.level(l);
    auto kids = t.level(l + 1);
    kernels::forEachIndex(parents.size(), [&](std::size_t i) {
      auto [c0, c1] = children(l, parents[i]);
      kids[2 * i] = std::move(c0);
      kids[2 * i + 1] = std::move(c1);
    });
  }
  return MartingaleTable(std::move(t));
}

// -------------------------------------------------------------------- spine

SpineTable::SpineTable(BinWord path, std::vector<Rat> onPath, std::vector<Rat> offPath)
    : path_(std::move(path)), on_(std::move(onPath)), off_(std::move(offPath)) {
  if (on_.size() != path_.size() + 1 || off_.size() != path_.size()) {
    throw Error(Errc::incomplete_table, "spine of length " + std::to_string(path_.size()) + " needs " +
                                            std::to_string(path_.size() + 1) + " path values and " +
                                            std::to_string(path_.size()) + " sibling values");
  }
  for (std::size_t k = 0; k < off_.size(); ++k) {
    if (on_[k + 1] + off_[k] != on_[k] * Rat(2)) {
      throw Error(Errc::unfair, "spine unfair at depth " + std::to_string(k) + ", residual " +
                                    (on_[k + 1] + off_[k] - on_[k] * Rat(2)).str());
    }
  }
}

SpineTable SpineTable::alongPath(const Strategy& s, const BinWord& path) {
  std::vector<Rat> on{s.initial()}, off;
  for (std::size_t k = 0; k < path.size(); ++k) {
    auto [c0, c1] = s.children(k, on.back());
    if (path[k]) std::swap(c0, c1);
    off.push_back(std::move(c1));
    on.push_back(std::move(c0));
  }
  return SpineTable(path, std::move(on), std::move(off));
}

Rat cdfAtDyadic(const SpineTable& s, const Rat& x) {
  if (x < Rat(0) || x > Rat(1)) throw Error(Errc::range, x.str() + " is outside [0,1]");
  if (!x.isDyadic()) throw Error(Errc::parameter, x.str() + " is not dyadic");
  if (x == Rat(1)) return s.onPath()[0];
  const unsigned long e = x.dyadicExponent();
  if (e > s.length()) throw Error(Errc::depth, "resolution exceeds spine length");
  const BinWord w = Dyadic(x).toWord(e);
  const BinWord& z = s.path();
  Rat sum;
  bool onSpine = true;  // w|i is a prefix of z
  for (std::size_t i = 0; i < e; ++i) {
    if (w[i]) {
      if (!onSpine) throw Error(Errc::range, x.str() + " needs values off the spine");
      // (z|i) 0 is the path child when z_i = 0, the sibling otherwise
      const Rat& left = z[i] ? s.offPath()[i] : s.onPath()[i + 1];
      sum += left * Rat::pow2(-static_cast<long>(i + 1));
    }
    onSpine = onSpine && w[i] == z[i];
  }
  return sum;
}

// ------------------------------------------------------------------ savings

namespace {

struct Split {
  Rat save;
  Rat active;
};

// Active capital follows M proportionally; whenever it reaches 2, all but 1
// is moved to savings.
Split nextSplit(const Split& parent, const Rat& mParent, const Rat& mChild) {
  Split s{parent.save, mParent.isZero() ? parent.active : parent.active * mChild / mParent};
  if (s.active >= Rat(2)) {
    s.save += s.active - Rat(1);
    s.active = Rat(1);
  }
  return s;
}

Split rootSplit(const Rat& m) { return nextSplit({Rat(0), m}, Rat(1), Rat(1)); }

Rat halfTotal(const Split& s) { return (s.save + s.active) / Rat(2); }

}  // namespace

MartingaleTable savingsTransform(const MartingaleTable& m) {
  const unsigned d = m.depth();
  std::vector<Split> cur{rootSplit(m.at(0, 0))};
  TreeTable out(d);
  out.at(0, 0) = halfTotal(cur[0]);
  for (unsigned l = 0; l < d; ++l) {
    std::vector<Split> next(cur.size() * 2);
    auto row = out.level(l + 1);
    kernels::forEachIndex(cur.size(), [&](std::size_t i) {
      for (std::size_t c = 2 * i; c < 2 * i + 2; ++c) {
        next[c] = nextSplit(cur[i], m.at(l, i), m.at(l + 1, c));
        row[c] = halfTotal(next[c]);
      }
    });
    cur = std::move(next);
  }
  return MartingaleTable(std::move(out));
}

SpineTable savingsTransform(const SpineTable& m) {
  Split cur = rootSplit(m.onPath()[0]);
  std::vector<Rat> on{halfTotal(cur)}, off;
  for (std::size_t k = 0; k < m.length(); ++k) {
    off.push_back(halfTotal(nextSplit(cur, m.onPath()[k], m.offPath()[k])));
    cur = nextSplit(cur, m.onPath()[k], m.onPath()[k + 1]);
    on.push_back(halfTotal(cur));
  }
  return SpineTable(m.path(), std::move(on), std::move(off));
}

Rat minSavingsDrop(const MartingaleTable& m) {
  // subtree minima, bottom-up
  const unsigned d = m.depth();
  std::vector<Rat> below(m.level(d).begin(), m.level(d).end());
  Rat worst;
  for (unsigned l = d; l-- > 0;) {
    std::vector<Rat> up(below.size() / 2);
    std::vector<Rat> drop(up.size());
    const auto row = m.level(l);
    kernels::forEachIndex(up.size(), [&](std::size_t i) {
      const Rat& childMin = min(below[2 * i], below[2 * i + 1]);
      drop[i] = childMin - row[i];
      up[i] = min(childMin, row[i]);
    });
    for (const Rat& x : drop) worst = min(worst, x);
    below = std::move(up);
  }
  return worst;
}

Rat minSavingsDrop(const SpineTable& m) {
  const std::size_t n = m.length();
  Rat worst;
  if (n == 0) return worst;
  Rat suffixMin = min(m.onPath()[n], m.offPath()[n - 1]);
  for (std::size_t k = n; k-- > 0;) {
    worst = min(worst, suffixMin - m.onPath()[k]);
    if (k > 0) suffixMin = min(suffixMin, min(m.onPath()[k], m.offPath()[k - 1]));
  }
  return worst;
}

// --------------------------------------------------------------- oscillator

namespace {

struct StepOut {
  Rat b[2];
  Phase ph[2];
  std::uint8_t fired = 0;  // bit k set when child k hit the threshold
};

StepOut oscillatorStep(const Rat& b, Phase ph, const Rat& m, const Rat& m0, const Rat& m1) {
  StepOut o;
  const Rat* mk[2] = {&m0, &m1};
  Rat r[2];
  if (ph == Phase::up) {
    for (int k = 0; k < 2; ++k) r[k] = b + (*mk[k] - m);
    const Rat three(3);
    if (r[0] < three && r[1] < three) {
      o.b[0] = r[0], o.b[1] = r[1];
      o.ph[0] = o.ph[1] = Phase::up;
      return o;
    }
    const int k = r[0] >= three ? 0 : 1;
    o.b[k] = three, o.ph[k] = Phase::down;
    o.b[1 - k] = b * Rat(2) - three, o.ph[1 - k] = Phase::up;
    o.fired = static_cast<std::uint8_t>((r[0] >= three) | ((r[1] >= three) << 1));
    return o;
  }
  for (int k = 0; k < 2; ++k) r[k] = b - (*mk[k] - m);
  const Rat two(2);
  if (r[0] > two && r[1] > two) {
    o.b[0] = r[0], o.b[1] = r[1];
    o.ph[0] = o.ph[1] = Phase::down;
    return o;
  }
  const int k = r[0] <= two ? 0 : 1;
  o.b[k] = two, o.ph[k] = Phase::up;
  o.b[1 - k] = b * Rat(2) - two, o.ph[1 - k] = Phase::down;
  o.fired = static_cast<std::uint8_t>((r[0] <= two) | ((r[1] <= two) << 1));
  return o;
}

void requireSavings(const Rat& drop) {
  if (drop < Rat(-1)) {
    throw Error(Errc::precondition, "input lacks the savings property: it drops by " + (-drop).str());
  }
}

}  // namespace

PhaseTable buildOscillator(const MartingaleTable& m, unsigned depth) {
  if (depth > m.depth()) throw Error(Errc::depth, "oscillator depth exceeds the input table");
  requireSavings(minSavingsDrop(m));
  TreeTable b(depth);
  PhaseTable p;
  p.phase.assign(b.size(), Phase::up);
  p.fired.assign(TreeTable::offset(depth), 0);
  b.at(0, 0) = Rat(2);
  for (unsigned l = 0; l < depth; ++l) {
    const auto parents = b.level(l);
    auto kids = b.level(l + 1);
    const std::size_t base = TreeTable::offset(l), kidBase = TreeTable::offset(l + 1);
    kernels::forEachIndex(parents.size(), [&](std::size_t i) {
      StepOut o = oscillatorStep(parents[i], p.phase[base + i], m.at(l, i), m.at(l + 1, 2 * i), m.at(l + 1, 2 * i + 1));
      for (int k = 0; k < 2; ++k) {
        kids[2 * i + k] = std::move(o.b[k]);
        p.phase[kidBase + 2 * i + k] = o.ph[k];
      }
      p.fired[base + i] = o.fired;
    });
  }
  p.b = MartingaleTable(std::move(b));
  return p;
}

PhaseSpine buildOscillator(const SpineTable& m) {
  requireSavings(minSavingsDrop(m));
  const BinWord& z = m.path();
  std::vector<Rat> on{Rat(2)}, off;
  PhaseSpine p;
  p.onPath = {Phase::up};
  for (std::size_t k = 0; k < z.size(); ++k) {
    const Rat& m0 = z[k] ? m.offPath()[k] : m.onPath()[k + 1];
    const Rat& m1 = z[k] ? m.onPath()[k + 1] : m.offPath()[k];
    StepOut o = oscillatorStep(on.back(), p.onPath.back(), m.onPath()[k], m0, m1);
    const int t = z[k] ? 1 : 0;
    off.push_back(o.b[1 - t]);
    p.offPath.push_back(o.ph[1 - t]);
    on.push_back(o.b[t]);
    p.onPath.push_back(o.ph[t]);
  }
  p.b = SpineTable(z, std::move(on), std::move(off));
  return p;
}

std::size_t countCrossings(const PhaseTable& p, const BinWord& z) {
  if (z.size() > p.b.depth()) throw Error(Errc::depth, "target longer than the table");
  std::size_t n = 0;
  Phase prev = p.phase[0];
  for (std::size_t k = 1; k <= z.size(); ++k) {
    const Phase cur = p.phase[TreeTable::offset(static_cast<unsigned>(k)) + z.prefix(k).index()];
    n += cur != prev;
    prev = cur;
  }
  return n;
}

std::size_t countCrossings(const PhaseSpine& p, const BinWord& z) {
  if (!z.isPrefixOf(p.b.path())) throw Error(Errc::range, "target is not a prefix of the spine path");
  std::size_t n = 0;
  for (std::size_t k = 1; k <= z.size(); ++k) n += p.onPath[k] != p.onPath[k - 1];
  return n;
}

std::vector<Check> verifyOscillator(const PhaseTable& p, const MartingaleTable& m) {
  std::vector<Check> out;
  const unsigned d = p.b.depth();
  const auto word = [](unsigned l, std::size_t i) { return "'" + BinWord::fromIndex(l, i).str() + "'"; };

  const auto bad = checkFairness(p.b);
  out.push_back({"fairness", bad.empty(), std::to_string(bad.size()) + " violations"});
  out.push_back({"root", p.b.at(0, 0) == Rat(2) && p.phase[0] == Phase::up,
                 "B(empty) = " + p.b.at(0, 0).str()});

  Check phaseInv{"phase-invariants", true, ""};
  Check range{"range-1-4", true, ""};
  Rat lo = p.b.at(0, 0), hi = lo;
  for (unsigned l = 0; l <= d; ++l) {
    const auto row = p.b.level(l);
    for (std::size_t i = 0; i < row.size(); ++i) {
      const Phase ph = p.phase[TreeTable::offset(l) + i];
      lo = min(lo, row[i]);
      hi = max(hi, row[i]);
      if (phaseInv.pass && ((ph == Phase::up && !(row[i] < Rat(3))) || (ph == Phase::down && !(row[i] > Rat(2))))) {
        phaseInv.pass = false;
        phaseInv.detail = (ph == Phase::up ? "up" : "down") + std::string(" with B = ") + row[i].str() + " at " +
                          word(l, i);
      }
    }
  }
  range.pass = Rat(1) <= lo && hi <= Rat(4);
  range.detail = "B in [" + lo.str() + ", " + hi.str() + "]";
  if (phaseInv.pass) phaseInv.detail = "all " + std::to_string(p.phase.size()) + " words";
  out.push_back(phaseInv);
  out.push_back(range);

  Check unique{"threshold-unique", true, ""};
  std::size_t fires = 0;
  for (std::size_t i = 0; i < p.fired.size(); ++i) {
    fires += p.fired[i] != 0;
    if (p.fired[i] == 3) unique.pass = false, unique.detail = "both children hit the threshold";
  }
  if (unique.pass) unique.detail = std::to_string(fires) + " threshold events";
  out.push_back(unique);

  // Since the last phase entry at sigma: up gives B >= 2 + M(tau) - M(sigma),
  // down gives B <= 3 - (M(tau) - M(sigma)).
  Check entry{"entry-inequalities", true, ""};
  std::vector<Rat> entryM{m.at(0, 0)};
  for (unsigned l = 1; l <= d && entry.pass; ++l) {
    std::vector<Rat> next(std::size_t{1} << l);
    const std::size_t base = TreeTable::offset(l), parentBase = TreeTable::offset(l - 1);
    for (std::size_t i = 0; i < next.size(); ++i) {
      const Phase ph = p.phase[base + i];
      const bool entered = ph != p.phase[parentBase + i / 2];
      next[i] = entered ? m.at(l, i) : entryM[i / 2];
      const Rat gain = m.at(l, i) - next[i];
      const Rat& b = p.b.at(l, i);
      const bool ok = ph == Phase::up ? b >= Rat(2) + gain : b <= Rat(3) - gain;
      if (!ok) {
        entry.pass = false;
        entry.detail = "at " + word(l, i) + ": B = " + b.str() + ", M gain since entry " + gain.str();
        break;
      }
    }
    entryM = std::move(next);
  }
  if (entry.pass) entry.detail = "savings bound carried to every word";
  out.push_back(entry);
  return out;
}

}  // namespace lipx
