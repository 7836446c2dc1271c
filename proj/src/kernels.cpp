#include "lipx/kernels.hpp"

#include <algorithm>

#include "lipx/error.hpp"

namespace lipx::kernels {

namespace {

void requireBlock(std::size_t n, std::size_t block) {
  if (block == 0 || n % block != 0) {
    throw Error(Errc::parameter, "block size " + std::to_string(block) + " does not divide " + std::to_string(n));
  }
}

void requireChildren(std::size_t parents, std::size_t children) {
  if (children != 2 * parents) {
    throw Error(Errc::incomplete_table, "child level has " + std::to_string(children) + " entries, expected " +
                                            std::to_string(2 * parents));
  }
}

void requireGrid(std::span<const Rat> t, std::span<const Rat> f) {
  if (t.size() != f.size()) throw Error(Errc::parameter, "grid and value lengths differ");
}

Rat powerTerm(const Rat& dt, const Rat& df, const Rat& p) {
  if (p == Rat(1)) return df.abs();
  if (dt.isZero()) throw Error(Errc::degenerate_pair, "repeated grid point");
  // |df|^p / |dt|^(p-1) = |df| * |df/dt|^(p-1)
  if (df.isZero()) return Rat(0);
  return df.abs() * requireExactPow(df / dt, p - Rat(1));
}

int maxThreads() {
#if defined(_OPENMP)
  return omp_get_max_threads();
#else
  return 1;
#endif
}

int threadId() {
#if defined(_OPENMP)
  return omp_get_thread_num();
#else
  return 0;
#endif
}

}  // namespace

int threadCount() { return maxThreads(); }

namespace serial {

Rat sumAbs(std::span<const Rat> v) {
  Rat s;
  for (const Rat& x : v) s += x.abs();
  return s;
}

std::vector<Rat> blockAbsSums(std::span<const Rat> v, std::size_t block) {
  requireBlock(v.size(), block);
  std::vector<Rat> out(v.size() / block);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = sumAbs(v.subspan(i * block, block));
  return out;
}

std::vector<Rat> exclusiveScan(std::span<const Rat> v) {
  std::vector<Rat> out(v.size() + 1);
  for (std::size_t i = 0; i < v.size(); ++i) out[i + 1] = out[i] + v[i];
  return out;
}

std::vector<std::size_t> fairnessViolations(std::span<const Rat> parents, std::span<const Rat> children) {
  requireChildren(parents.size(), children.size());
  std::vector<std::size_t> bad;
  for (std::size_t i = 0; i < parents.size(); ++i) {
    if (children[2 * i] + children[2 * i + 1] != parents[i] * Rat(2)) bad.push_back(i);
  }
  return bad;
}

Rat powerVariationSum(std::span<const Rat> t, std::span<const Rat> f, const Rat& p) {
  requireGrid(t, f);
  Rat s;
  for (std::size_t i = 0; i + 1 < t.size(); ++i) s += powerTerm(t[i + 1] - t[i], f[i + 1] - f[i], p);
  return s;
}

}  // namespace serial

namespace omp {

// Reductions keep one partial per thread and combine them on the calling
// thread. Exact arithmetic makes the result independent of the split.

Rat sumAbs(std::span<const Rat> v) {
  std::vector<Rat> partial(static_cast<std::size_t>(maxThreads()));
  const auto n = static_cast<std::ptrdiff_t>(v.size());
#if defined(_OPENMP)
#pragma omp parallel if (n > 1024)
#endif
  {
    Rat local;
#if defined(_OPENMP)
#pragma omp for schedule(static) nowait
#endif
    for (std::ptrdiff_t i = 0; i < n; ++i) local += v[static_cast<std::size_t>(i)].abs();
    partial[static_cast<std::size_t>(threadId())] = std::move(local);
  }
  Rat s;
  for (const Rat& x : partial) s += x;
  return s;
}

std::vector<Rat> blockAbsSums(std::span<const Rat> v, std::size_t block) {
  requireBlock(v.size(), block);
  std::vector<Rat> out(v.size() / block);
  forEachIndex(out.size(), [&](std::size_t i) { out[i] = serial::sumAbs(v.subspan(i * block, block)); });
  return out;
}

std::vector<Rat> exclusiveScan(std::span<const Rat> v) {
  const std::size_t n = v.size();
  std::vector<Rat> out(n + 1);
  const auto chunks = static_cast<std::size_t>(std::max(1, maxThreads()));
  if (n < 4096 || chunks == 1) return serial::exclusiveScan(v);

  // Pass 1: chunk totals. Pass 2: serial scan of totals. Pass 3: local scans
  // seeded with the chunk offsets.
  const std::size_t len = (n + chunks - 1) / chunks;
  std::vector<Rat> totals(chunks);
  forEachIndex(chunks, [&](std::size_t c) {
    const std::size_t lo = std::min(n, c * len), hi = std::min(n, lo + len);
    Rat s;
    for (std::size_t i = lo; i < hi; ++i) s += v[i];
    totals[c] = std::move(s);
  });
  std::vector<Rat> offsets = serial::exclusiveScan(totals);
  forEachIndex(chunks, [&](std::size_t c) {
    const std::size_t lo = std::min(n, c * len), hi = std::min(n, lo + len);
    Rat s = offsets[c];
    for (std::size_t i = lo; i < hi; ++i) {
      s += v[i];
      out[i + 1] = s;
    }
  });
  return out;
}

std::vector<std::size_t> fairnessViolations(std::span<const Rat> parents, std::span<const Rat> children) {
  requireChildren(parents.size(), children.size());
  std::vector<char> flag(parents.size(), 0);
  forEachIndex(parents.size(), [&](std::size_t i) {
    flag[i] = children[2 * i] + children[2 * i + 1] != parents[i] * Rat(2);
  });
  std::vector<std::size_t> bad;
  for (std::size_t i = 0; i < flag.size(); ++i) {
    if (flag[i]) bad.push_back(i);
  }
  return bad;
}

Rat powerVariationSum(std::span<const Rat> t, std::span<const Rat> f, const Rat& p) {
  requireGrid(t, f);
  if (t.size() < 2) return Rat(0);
  std::vector<Rat> terms(t.size() - 1);
  forEachIndex(terms.size(), [&](std::size_t i) { terms[i] = powerTerm(t[i + 1] - t[i], f[i + 1] - f[i], p); });
  return sumAbs(terms);
}

}  // namespace omp

}  // namespace lipx::kernels
