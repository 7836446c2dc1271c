#pragma once

// Data-parallel inner loops over dyadic levels.
//
// Every kernel exists twice: `serial::` is the plain reference loop kept for
// testing, `omp::` is the OpenMP version the library calls. Because all
// arithmetic is exact the two must agree bit for bit, whatever the thread
// count or reduction order; tests/test_kernels.cpp checks exactly that and
// bench/bench_kernels.cpp times them against each other.

#include <cstddef>
#include <exception>
#include <mutex>
#include <span>
#include <vector>

#include "lipx/rat.hpp"

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace lipx::kernels {

namespace serial {

Rat sumAbs(std::span<const Rat> v);

/// out[i] = sum_{j in [i*block, (i+1)*block)} |v[j]|. v.size() must be a
/// multiple of block.
std::vector<Rat> blockAbsSums(std::span<const Rat> v, std::size_t block);

/// out[0] = 0, out[i] = v[0] + ... + v[i-1]; out has v.size() + 1 entries.
std::vector<Rat> exclusiveScan(std::span<const Rat> v);

/// Indices i with children[2i] + children[2i+1] != 2 parents[i], ascending.
std::vector<std::size_t> fairnessViolations(std::span<const Rat> parents, std::span<const Rat> children);

/// sum_i |f[i+1]-f[i]|^p / |t[i+1]-t[i]|^(p-1). Throws Errc::inexact_power
/// when a term is irrational.
Rat powerVariationSum(std::span<const Rat> t, std::span<const Rat> f, const Rat& p);

template <class Fn>
void forEachIndex(std::size_t n, Fn&& fn) {
  for (std::size_t i = 0; i < n; ++i) fn(i);
}

}  // namespace serial

namespace omp {

Rat sumAbs(std::span<const Rat> v);
std::vector<Rat> blockAbsSums(std::span<const Rat> v, std::size_t block);
std::vector<Rat> exclusiveScan(std::span<const Rat> v);
std::vector<std::size_t> fairnessViolations(std::span<const Rat> parents, std::span<const Rat> children);
Rat powerVariationSum(std::span<const Rat> t, std::span<const Rat> f, const Rat& p);

/// Runs fn(i) for i in [0, n) across threads. The first exception thrown by
/// any iteration is rethrown on the calling thread after the loop.
template <class Fn>
void forEachIndex(std::size_t n, Fn&& fn) {
  std::exception_ptr failure;
  std::mutex failureLock;
#if defined(_OPENMP)
#pragma omp parallel for schedule(static) if (n > 256)
#endif
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard<std::mutex> lock(failureLock);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace omp

/// Number of threads the omp kernels will use (1 without OpenMP).
int threadCount();

using omp::blockAbsSums;
using omp::exclusiveScan;
using omp::fairnessViolations;
using omp::forEachIndex;
using omp::powerVariationSum;
using omp::sumAbs;

}  // namespace lipx::kernels
