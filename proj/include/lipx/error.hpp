#pragma once

#include <stdexcept>
#include <string>

namespace lipx {

/// Error conditions, grouped by the module that raises them. `code()` yields
/// the module-qualified name printed by the CLI ("core.degenerate_pair", ...).
enum class Errc {
  // exact-core
  parse,
  degenerate_pair,
  empty_interval,
  parameter,
  range,
  insufficient_prefix,
  inexact_power,
  // martingale-kernel
  incomplete_table,
  depth,
  unfair,
  negative_value,
  invalid_bounds,
  staging,
  // interval-re
  machine,
  non_additive_oracle,
  oracle,
  // variation-synthesis
  spec,
  schedule,
  contract,
  non_atomic_witness_missing,
  // oscillator
  precondition,
  // schnorr-lebesgue
  dimension,
  ambiguity,
  boundary,
  unsupported_class,
  // cli
  file,
};

const char* code(Errc e) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc e, const std::string& what) : std::runtime_error(what), errc_(e) {}

  Errc errc() const noexcept { return errc_; }
  std::string qualified() const { return std::string(code(errc_)) + ": " + what(); }

 private:
  Errc errc_;
};

}  // namespace lipx
