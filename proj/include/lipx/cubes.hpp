#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "lipx/dyadic.hpp"
#include "lipx/piecewise.hpp"
#include "lipx/rat.hpp"

namespace lipx {

/// Largest supported dimension (a split node has 2^n children).
inline constexpr unsigned kMaxDim = 6;
/// Finest cube level accepted anywhere.
inline constexpr unsigned kMaxCubeLevel = 40;

/// Product of [i_j 2^-k, (i_j + 1) 2^-k] over the n coordinates.
struct DyadicCube {
  unsigned level = 0;
  std::vector<std::uint64_t> index;  // one per coordinate

  static DyadicCube unit(unsigned dim) { return {0, std::vector<std::uint64_t>(dim, 0)}; }

  unsigned dim() const noexcept { return static_cast<unsigned>(index.size()); }
  Rat measure() const { return Rat::pow2(-static_cast<long>(level * dim())); }
  Rat lower(unsigned j) const;
  Rat upper(unsigned j) const;

  /// Sub-cube number c (bit j of c picks the upper half in coordinate j).
  DyadicCube child(unsigned c) const;
  DyadicCube parent() const;
  /// Closed containment.
  bool contains(const DyadicCube& other) const;

  std::string str() const;  // "k:i0,i1,..."

  friend bool operator==(const DyadicCube&, const DyadicCube&) = default;
  friend auto operator<=>(const DyadicCube&, const DyadicCube&) = default;
};

/// Point of [0,1]^n given either by rational coordinates or by a prefix of
/// its interleaved binary expansion Z(n i + k) = Z_k(i).
class CubePoint {
 public:
  static CubePoint rational(std::vector<Rat> coords);
  static CubePoint bits(unsigned dim, BinWord interleaved);

  unsigned dim() const noexcept { return dim_; }
  bool isRational() const noexcept { return !coords_.empty(); }
  const std::vector<Rat>& coords() const noexcept { return coords_; }

  /// Binary digit i of coordinate k. Errc::ambiguity when a rational
  /// coordinate is dyadic there, Errc::insufficient_prefix past the bits.
  bool bit(unsigned k, std::size_t i) const;

  /// The level-k cube containing the point (same errors as bit()).
  DyadicCube cubeAt(unsigned level) const;

  /// Closed membership; Errc::ambiguity if a bit prefix is too short to decide.
  bool in(const DyadicCube& c) const;

 private:
  unsigned dim_ = 1;
  std::vector<Rat> coords_;
  BinWord bits_;
};

/// Finite union of dyadic cubes in [0,1]^n, up to measure-zero boundaries.
/// Stored as a canonical 2^n-ary tree: no split node has children that are
/// all full or all empty. Shares structure; values are immutable.
class DyadicCubeSet {
 public:
  struct Node;
  using NodePtr = std::shared_ptr<const Node>;

  explicit DyadicCubeSet(unsigned dim = 1);  // empty
  static DyadicCubeSet full(unsigned dim);
  static DyadicCubeSet of(const DyadicCube& c);
  static DyadicCubeSet of(unsigned dim, const std::vector<DyadicCube>& cubes);

  unsigned dim() const noexcept { return dim_; }
  bool isEmpty() const;
  bool isFull() const;

  /// Errc::dimension when dimensions differ.
  DyadicCubeSet unite(const DyadicCubeSet& o) const;
  DyadicCubeSet intersect(const DyadicCubeSet& o) const;
  DyadicCubeSet subtract(const DyadicCubeSet& o) const;

  Rat measure() const;
  /// Maximal cubes of the set in depth-first order.
  std::vector<DyadicCube> cubes() const;
  /// Deepest level of any maximal cube (0 when empty or full).
  unsigned maxLevel() const;

  /// Membership of a point. Errc::boundary when the point lies on a face
  /// separating inside from outside.
  bool contains(const CubePoint& z) const;

  /// Level-`level` cubes that meet the set or touch it (closed L-infinity
  /// neighbourhood of width 2^-level). Requires level >= maxLevel().
  DyadicCubeSet dilate(unsigned level) const;

  const NodePtr& root() const noexcept { return root_; }
  DyadicCubeSet(unsigned dim, NodePtr root);

  friend bool operator==(const DyadicCubeSet& a, const DyadicCubeSet& b);

 private:
  unsigned dim_;
  NodePtr root_;
};

struct DyadicCubeSet::Node {
  enum class Kind : std::uint8_t { empty, full, split } kind = Kind::empty;
  std::vector<NodePtr> children;  // 2^n entries when split
};

/// Function on [0,1]^n that is constant on the leaves of a 2^n-ary tree.
class CubeStepFn {
 public:
  struct Node;
  using NodePtr = std::shared_ptr<const Node>;

  explicit CubeStepFn(unsigned dim = 1, const Rat& c = Rat(0));
  static CubeStepFn indicator(const DyadicCubeSet& s, const Rat& value = Rat(1));
  /// n = 1 only; the PiecewiseFn must be in step mode.
  static CubeStepFn fromPiecewise(const PiecewiseFn& f);
  /// Step PiecewiseFn on [0,1] (n = 1 only).
  PiecewiseFn toPiecewise() const;

  unsigned dim() const noexcept { return dim_; }

  friend CubeStepFn operator+(const CubeStepFn& a, const CubeStepFn& b);
  CubeStepFn scaled(const Rat& c) const;
  CubeStepFn abs() const;

  /// Errc::boundary when the point sits on a face between different values.
  Rat operator()(const CubePoint& z) const;

  Rat integral() const;
  Rat integralOver(const DyadicCubeSet& s) const;
  /// Exact integral of |f|^p; Errc::inexact_power if some |value|^p is irrational.
  Rat integralAbsPow(const Rat& p) const;
  Rat supAbs() const;

  const NodePtr& root() const noexcept { return root_; }
  CubeStepFn(unsigned dim, NodePtr root) : dim_(dim), root_(std::move(root)) {}

 private:
  unsigned dim_;
  NodePtr root_;
};

struct CubeStepFn::Node {
  Rat value;                      // leaves only
  std::vector<NodePtr> children;  // empty for a leaf
};

}  // namespace lipx
