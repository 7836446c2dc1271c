#include "lipx/error.hpp"

namespace lipx {

const char* code(Errc e) noexcept {
  switch (e) {
    case Errc::parse: return "core.parse";
    case Errc::degenerate_pair: return "core.degenerate_pair";
    case Errc::empty_interval: return "core.empty_interval";
    case Errc::parameter: return "core.parameter";
    case Errc::range: return "core.range";
    case Errc::insufficient_prefix: return "core.insufficient_prefix";
    case Errc::inexact_power: return "core.inexact_power";
    case Errc::incomplete_table: return "mg.incomplete_table";
    case Errc::depth: return "mg.depth";
    case Errc::unfair: return "mg.unfair";
    case Errc::negative_value: return "mg.negative_value";
    case Errc::invalid_bounds: return "mg.invalid_bounds";
    case Errc::staging: return "mg.staging";
    case Errc::machine: return "ire.machine";
    case Errc::non_additive_oracle: return "ire.non_additive_oracle";
    case Errc::oracle: return "ire.oracle";
    case Errc::spec: return "synth.spec";
    case Errc::schedule: return "synth.schedule";
    case Errc::contract: return "synth.contract";
    case Errc::non_atomic_witness_missing: return "synth.non_atomic_witness_missing";
    case Errc::precondition: return "osc.precondition";
    case Errc::dimension: return "schnorr.dimension";
    case Errc::ambiguity: return "schnorr.ambiguity";
    case Errc::boundary: return "schnorr.boundary";
    case Errc::unsupported_class: return "schnorr.unsupported_class";
    case Errc::file: return "cli.file";
  }
  return "unknown";
}

}  // namespace lipx
