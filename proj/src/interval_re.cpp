#include "lipx/interval_re.hpp"

#include <memory>

#include "lipx/error.hpp"
#include "lipx/kernels.hpp"

namespace lipx {

PrefixFreeMachine::PrefixFreeMachine(std::map<BinWord, Rat> table) : table_(std::move(table)) {
  // In lexicographic order every extension of a key follows it directly.
  const BinWord* prev = nullptr;
  std::map<std::string, const BinWord*> lex;
  for (const auto& [w, out] : table_) {
    if (!out.isDyadic() || out < Rat(0) || !(out < Rat(1))) {
      throw Error(Errc::machine, "output " + out.str() + " of '" + w.str() + "' is not a dyadic rational in [0,1)");
    }
    lex.emplace(w.str(), &w);
  }
  for (const auto& [text, w] : lex) {
    if (prev && prev->isPrefixOf(*w)) {
      throw Error(Errc::machine, "'" + prev->str() + "' is a prefix of '" + w->str() + "'");
    }
    prev = w;
  }
}

Rat fsEval(const PrefixFreeMachine& s, const Rat& x) {
  if (x < Rat(0) || x > Rat(1)) throw Error(Errc::range, x.str() + " is outside [0,1]");
  Rat sum;
  for (const auto& [w, out] : s.table()) {
    if (out < x) sum += Rat::pow2(-static_cast<long>(w.size()));
  }
  return sum;
}

IntervalREOracle::IntervalREOracle(Approx approx, std::optional<Rat> lipschitz, std::string description)
    : approx_(std::move(approx)), lipschitz_(std::move(lipschitz)), description_(std::move(description)) {
  if (lipschitz_ && lipschitz_->sign() < 0) throw Error(Errc::oracle, "negative Lipschitz bound");
}

Rat IntervalREOracle::approx(const Rat& p, const Rat& q, std::size_t stage) const {
  if (p < Rat(0) || q > Rat(1) || q < p) {
    throw Error(Errc::oracle, "pair (" + p.str() + ", " + q.str() + ") is not an interval of [0,1]");
  }
  return approx_(p, q, stage);
}

IntervalREOracle IntervalREOracle::linear(const Rat& c) {
  if (c.sign() < 0) throw Error(Errc::oracle, "linear oracle needs c >= 0");
  return IntervalREOracle([c](const Rat& p, const Rat& q, std::size_t) { return c * (q - p); }, c,
                          "linear:" + c.str());
}

IntervalREOracle IntervalREOracle::zero() {
  return IntervalREOracle([](const Rat&, const Rat&, std::size_t) { return Rat(0); }, Rat(0), "zero");
}

IntervalREOracle IntervalREOracle::fromIncrements(unsigned level, std::vector<std::vector<Rat>> stageIncrements,
                                                  std::optional<Rat> lipschitz) {
  if (stageIncrements.empty()) throw Error(Errc::oracle, "no stages");
  const std::size_t cells = std::size_t{1} << level;
  // prefix sums per stage so that approx is O(1)
  auto prefix = std::make_shared<std::vector<std::vector<Rat>>>();
  for (const auto& inc : stageIncrements) {
    if (inc.size() != cells) {
      throw Error(Errc::oracle, "stage has " + std::to_string(inc.size()) + " increments, level needs " +
                                    std::to_string(cells));
    }
    prefix->push_back(kernels::exclusiveScan(inc));
  }
  const Rat scale = Rat::pow2(static_cast<long>(level));
  auto approx = [prefix, scale, level](const Rat& p, const Rat& q, std::size_t s) {
    const Rat ip = p * scale, iq = q * scale;
    if (!ip.isInteger() || !iq.isInteger()) {
      throw Error(Errc::oracle, "table oracle resolves only multiples of 2^-" + std::to_string(level));
    }
    const auto& row = (*prefix)[std::min(s, prefix->size() - 1)];
    return row[iq.num().get_ui()] - row[ip.num().get_ui()];
  };
  return IntervalREOracle(approx, std::move(lipschitz), "table:level " + std::to_string(level));
}

IntervalREOracle IntervalREOracle::fromStaged(StagedMartingale sm, std::optional<Rat> lipschitz) {
  auto shared = std::make_shared<const StagedMartingale>(std::move(sm));
  auto approx = [shared](const Rat& p, const Rat& q, std::size_t s) {
    const MartingaleTable& m = shared->stage(s);
    return cdfAtDyadic(m, q) - cdfAtDyadic(m, p);
  };
  return IntervalREOracle(approx, std::move(lipschitz), "table:staged");
}

IntervalREOracle oracleFromMachine(const PrefixFreeMachine& s) {
  auto shared = std::make_shared<const PrefixFreeMachine>(s);
  auto approx = [shared](const Rat& p, const Rat& q, std::size_t) { return fsEval(*shared, q) - fsEval(*shared, p); };
  return IntervalREOracle(approx, std::nullopt, "machine");
}

StagedMartingale oracleToStaged(const IntervalREOracle& f, unsigned depth, std::size_t stages) {
  if (stages == 0) throw Error(Errc::staging, "need at least one stage");
  StagedMartingale out;
  for (std::size_t s = 0; s < stages; ++s) {
    TreeTable t(depth);
    for (unsigned l = 0; l <= depth; ++l) {
      auto row = t.level(l);
      const Rat w = Rat::pow2(-static_cast<long>(l));
      const Rat inv = Rat::pow2(static_cast<long>(l));
      kernels::forEachIndex(row.size(), [&](std::size_t i) {
        const Rat p = Rat(static_cast<long>(i)) * w;
        row[i] = f.approx(p, p + w, s) * inv;
      });
    }
    const auto bad = checkFairness(t);
    if (!bad.empty()) {
      const FairnessViolation* worst = &bad[0];
      for (const auto& v : bad) {
        if (v.residual.abs() > worst->residual.abs()) worst = &v;
      }
      // residual of M is 2^(|w|+1) times the additivity residual of f
      const Rat residual = worst->residual * Rat::pow2(-static_cast<long>(worst->word.size() + 1));
      throw Error(Errc::non_additive_oracle, "stage " + std::to_string(s) + " is not additive at '" +
                                                 worst->word.str() + "', worst residual " + residual.str());
    }
    for (unsigned l = 0; l <= depth; ++l) {
      const auto row = t.level(l);
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (row[i].sign() < 0) {
          throw Error(Errc::oracle, "negative increment at '" + BinWord::fromIndex(l, i).str() + "'");
        }
        if (f.lipschitz() && row[i] > *f.lipschitz()) {
          throw Error(Errc::oracle, "slope " + row[i].str() + " at '" + BinWord::fromIndex(l, i).str() +
                                        "' exceeds the declared bound " + f.lipschitz()->str());
        }
      }
    }
    out.append(MartingaleTable(std::move(t)));
  }
  return out;
}

}  // namespace lipx
