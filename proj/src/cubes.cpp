#include "lipx/cubes.hpp"

#include <algorithm>
#include <functional>

#include "lipx/error.hpp"

namespace lipx {

namespace {

void requireDim(unsigned dim) {
  if (dim == 0 || dim > kMaxDim) {
    throw Error(Errc::dimension, "dimension " + std::to_string(dim) + " is outside 1.." + std::to_string(kMaxDim));
  }
}

void requireSameDim(unsigned a, unsigned b) {
  if (a != b) throw Error(Errc::dimension, "dimensions " + std::to_string(a) + " and " + std::to_string(b) + " differ");
}

Rat cellVolume(unsigned dim, unsigned level) { return Rat::pow2(-static_cast<long>(dim * level)); }

}  // namespace

// ------------------------------------------------------------------- cubes

Rat DyadicCube::lower(unsigned j) const {
  return Rat(mpz_class(static_cast<unsigned long>(index[j])), mpz_class(1)) * Rat::pow2(-static_cast<long>(level));
}

Rat DyadicCube::upper(unsigned j) const {
  return Rat(mpz_class(static_cast<unsigned long>(index[j] + 1)), mpz_class(1)) * Rat::pow2(-static_cast<long>(level));
}

DyadicCube DyadicCube::child(unsigned c) const {
  DyadicCube k{level + 1, index};
  for (unsigned j = 0; j < dim(); ++j) k.index[j] = 2 * index[j] + ((c >> j) & 1u);
  return k;
}

DyadicCube DyadicCube::parent() const {
  if (level == 0) throw Error(Errc::range, "the unit cube has no parent");
  DyadicCube p{level - 1, index};
  for (auto& i : p.index) i >>= 1;
  return p;
}

bool DyadicCube::contains(const DyadicCube& o) const {
  if (o.dim() != dim() || o.level < level) return false;
  for (unsigned j = 0; j < dim(); ++j) {
    if ((o.index[j] >> (o.level - level)) != index[j]) return false;
  }
  return true;
}

std::string DyadicCube::str() const {
  std::string s = std::to_string(level) + ":";
  for (unsigned j = 0; j < dim(); ++j) s += (j ? "," : "") + std::to_string(index[j]);
  return s;
}

// ------------------------------------------------------------------- points

CubePoint CubePoint::rational(std::vector<Rat> coords) {
  requireDim(static_cast<unsigned>(coords.size()));
  for (const Rat& c : coords) {
    if (c < Rat(0) || c > Rat(1)) throw Error(Errc::range, "coordinate " + c.str() + " is outside [0,1]");
  }
  CubePoint p;
  p.dim_ = static_cast<unsigned>(coords.size());
  p.coords_ = std::move(coords);
  return p;
}

CubePoint CubePoint::bits(unsigned dim, BinWord interleaved) {
  requireDim(dim);
  CubePoint p;
  p.dim_ = dim;
  p.bits_ = std::move(interleaved);
  return p;
}

bool CubePoint::bit(unsigned k, std::size_t i) const {
  if (k >= dim_) throw Error(Errc::dimension, "coordinate " + std::to_string(k) + " out of range");
  if (!isRational()) {
    const std::size_t pos = dim_ * i + k;
    if (pos >= bits_.size()) {
      throw Error(Errc::insufficient_prefix, "bit " + std::to_string(pos) + " of the expansion is not given");
    }
    return bits_[pos];
  }
  const Rat scaled = coords_[k] * Rat::pow2(static_cast<long>(i) + 1);
  if (scaled.isInteger() && !coords_[k].isZero()) {
    throw Error(Errc::ambiguity, "coordinate " + coords_[k].str() + " has two binary expansions");
  }
  return mpz_class(scaled.floor() % 2) != 0;
}

DyadicCube CubePoint::cubeAt(unsigned level) const {
  if (level > kMaxCubeLevel) throw Error(Errc::depth, "cube level too fine");
  DyadicCube c{level, std::vector<std::uint64_t>(dim_, 0)};
  for (unsigned k = 0; k < dim_; ++k) {
    for (unsigned i = 0; i < level; ++i) c.index[k] = 2 * c.index[k] + (bit(k, i) ? 1 : 0);
  }
  return c;
}

bool CubePoint::in(const DyadicCube& c) const {
  requireSameDim(c.dim(), dim_);
  if (isRational()) {
    for (unsigned j = 0; j < dim_; ++j) {
      if (coords_[j] < c.lower(j) || coords_[j] > c.upper(j)) return false;
    }
    return true;
  }
  if (dim_ * static_cast<std::size_t>(c.level) > bits_.size()) {
    throw Error(Errc::ambiguity, "prefix too short to place the point in a level-" + std::to_string(c.level) + " cube");
  }
  return cubeAt(c.level) == c;
}

namespace {

// Children of the current cell that a point may lie in. A rational point on
// the middle face of coordinate j lies in both halves.
std::vector<unsigned> candidateChildren(const CubePoint& z, const DyadicCube& cell) {
  const unsigned n = z.dim();
  std::vector<unsigned> out{0};
  for (unsigned j = 0; j < n; ++j) {
    int side;  // 0 lower, 1 upper, 2 both
    if (z.isRational()) {
      const Rat u = z.coords()[j] * Rat::pow2(static_cast<long>(cell.level) + 1) -
                    Rat(static_cast<long>(2 * cell.index[j]));
      side = u < Rat(1) ? 0 : (u > Rat(1) ? 1 : 2);
    } else {
      side = z.bit(j, cell.level) ? 1 : 0;
    }
    std::vector<unsigned> next;
    for (unsigned c : out) {
      if (side != 1) next.push_back(c);
      if (side != 0) next.push_back(c | (1u << j));
    }
    out = std::move(next);
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------- cube sets

namespace {

using SetNode = DyadicCubeSet::Node;
using SetPtr = DyadicCubeSet::NodePtr;

const SetPtr& emptyNode() {
  static const SetPtr n = std::make_shared<const SetNode>(SetNode{SetNode::Kind::empty, {}});
  return n;
}

const SetPtr& fullNode() {
  static const SetPtr n = std::make_shared<const SetNode>(SetNode{SetNode::Kind::full, {}});
  return n;
}

SetPtr makeSplit(std::vector<SetPtr> kids) {
  const auto same = [&](SetNode::Kind k) {
    return std::all_of(kids.begin(), kids.end(), [&](const SetPtr& c) { return c->kind == k; });
  };
  if (same(SetNode::Kind::full)) return fullNode();
  if (same(SetNode::Kind::empty)) return emptyNode();
  return std::make_shared<const SetNode>(SetNode{SetNode::Kind::split, std::move(kids)});
}

const SetPtr& childOf(const SetPtr& n, unsigned c) { return n->kind == SetNode::Kind::split ? n->children[c] : n; }

enum class SetOp { unite, intersect, subtract };

SetPtr combine(const SetPtr& a, const SetPtr& b, SetOp op, unsigned arity) {
  using K = SetNode::Kind;
  switch (op) {
    case SetOp::unite:
      if (a->kind == K::full || b->kind == K::full) return fullNode();
      if (a->kind == K::empty) return b;
      if (b->kind == K::empty) return a;
      break;
    case SetOp::intersect:
      if (a->kind == K::empty || b->kind == K::empty) return emptyNode();
      if (a->kind == K::full) return b;
      if (b->kind == K::full) return a;
      break;
    case SetOp::subtract:
      if (a->kind == K::empty || b->kind == K::full) return emptyNode();
      if (b->kind == K::empty) return a;
      break;
  }
  std::vector<SetPtr> kids(arity);
  for (unsigned c = 0; c < arity; ++c) kids[c] = combine(childOf(a, c), childOf(b, c), op, arity);
  return makeSplit(std::move(kids));
}

bool sameTree(const SetPtr& a, const SetPtr& b) {
  if (a == b) return true;
  if (a->kind != b->kind) return false;
  if (a->kind != SetNode::Kind::split) return true;
  for (std::size_t c = 0; c < a->children.size(); ++c) {
    if (!sameTree(a->children[c], b->children[c])) return false;
  }
  return true;
}

// Cells with lo[j] <= index[j] <= hi[j] at the given level.
SetPtr boxNode(const DyadicCube& cell, unsigned level, const std::vector<std::uint64_t>& lo,
               const std::vector<std::uint64_t>& hi) {
  const unsigned shift = level - cell.level;
  bool inside = true;
  for (unsigned j = 0; j < cell.dim(); ++j) {
    const std::uint64_t first = cell.index[j] << shift;
    const std::uint64_t last = first + (std::uint64_t{1} << shift) - 1;
    if (last < lo[j] || first > hi[j]) return emptyNode();
    inside = inside && lo[j] <= first && last <= hi[j];
  }
  if (inside) return fullNode();
  const unsigned arity = 1u << cell.dim();
  std::vector<SetPtr> kids(arity);
  for (unsigned c = 0; c < arity; ++c) kids[c] = boxNode(cell.child(c), level, lo, hi);
  return makeSplit(std::move(kids));
}

}  // namespace

DyadicCubeSet::DyadicCubeSet(unsigned dim) : dim_(dim), root_(emptyNode()) { requireDim(dim); }

DyadicCubeSet::DyadicCubeSet(unsigned dim, NodePtr root) : dim_(dim), root_(std::move(root)) { requireDim(dim); }

DyadicCubeSet DyadicCubeSet::full(unsigned dim) { return DyadicCubeSet(dim, fullNode()); }

DyadicCubeSet DyadicCubeSet::of(const DyadicCube& c) {
  requireDim(c.dim());
  if (c.level > kMaxCubeLevel) throw Error(Errc::depth, "cube level too fine");
  const unsigned arity = 1u << c.dim();
  SetPtr node = fullNode();
  for (unsigned l = c.level; l-- > 0;) {
    unsigned which = 0;
    for (unsigned j = 0; j < c.dim(); ++j) which |= static_cast<unsigned>((c.index[j] >> (c.level - 1 - l)) & 1u) << j;
    std::vector<SetPtr> kids(arity, emptyNode());
    kids[which] = node;
    node = makeSplit(std::move(kids));
  }
  return DyadicCubeSet(c.dim(), node);
}

DyadicCubeSet DyadicCubeSet::of(unsigned dim, const std::vector<DyadicCube>& cubes) {
  DyadicCubeSet s(dim);
  for (const auto& c : cubes) {
    requireSameDim(c.dim(), dim);
    s = s.unite(of(c));
  }
  return s;
}

bool DyadicCubeSet::isEmpty() const { return root_->kind == Node::Kind::empty; }
bool DyadicCubeSet::isFull() const { return root_->kind == Node::Kind::full; }

DyadicCubeSet DyadicCubeSet::unite(const DyadicCubeSet& o) const {
  requireSameDim(dim_, o.dim_);
  return DyadicCubeSet(dim_, combine(root_, o.root_, SetOp::unite, 1u << dim_));
}

DyadicCubeSet DyadicCubeSet::intersect(const DyadicCubeSet& o) const {
  requireSameDim(dim_, o.dim_);
  return DyadicCubeSet(dim_, combine(root_, o.root_, SetOp::intersect, 1u << dim_));
}

DyadicCubeSet DyadicCubeSet::subtract(const DyadicCubeSet& o) const {
  requireSameDim(dim_, o.dim_);
  return DyadicCubeSet(dim_, combine(root_, o.root_, SetOp::subtract, 1u << dim_));
}

Rat DyadicCubeSet::measure() const {
  std::function<Rat(const SetPtr&, unsigned)> go = [&](const SetPtr& n, unsigned level) -> Rat {
    if (n->kind == Node::Kind::empty) return Rat(0);
    if (n->kind == Node::Kind::full) return cellVolume(dim_, level);
    Rat s;
    for (const auto& c : n->children) s += go(c, level + 1);
    return s;
  };
  return go(root_, 0);
}

std::vector<DyadicCube> DyadicCubeSet::cubes() const {
  std::vector<DyadicCube> out;
  std::function<void(const SetPtr&, const DyadicCube&)> go = [&](const SetPtr& n, const DyadicCube& cell) {
    if (n->kind == Node::Kind::full) out.push_back(cell);
    if (n->kind != Node::Kind::split) return;
    for (unsigned c = 0; c < n->children.size(); ++c) go(n->children[c], cell.child(c));
  };
  go(root_, DyadicCube::unit(dim_));
  return out;
}

unsigned DyadicCubeSet::maxLevel() const {
  std::function<unsigned(const SetPtr&)> go = [&](const SetPtr& n) -> unsigned {
    if (n->kind != Node::Kind::split) return 0;
    unsigned d = 0;
    for (const auto& c : n->children) d = std::max(d, go(c));
    return d + 1;
  };
  return go(root_);
}

bool DyadicCubeSet::contains(const CubePoint& z) const {
  requireSameDim(z.dim(), dim_);
  std::function<bool(const SetPtr&, const DyadicCube&)> go = [&](const SetPtr& n, const DyadicCube& cell) -> bool {
    if (n->kind != Node::Kind::split) return n->kind == Node::Kind::full;
    const auto cands = candidateChildren(z, cell);
    const bool first = go(n->children[cands[0]], cell.child(cands[0]));
    for (std::size_t i = 1; i < cands.size(); ++i) {
      if (go(n->children[cands[i]], cell.child(cands[i])) != first) {
        throw Error(Errc::boundary, "point lies on a face of the set");
      }
    }
    return first;
  };
  return go(root_, DyadicCube::unit(dim_));
}

DyadicCubeSet DyadicCubeSet::dilate(unsigned level) const {
  if (level < maxLevel()) throw Error(Errc::depth, "dilation grid coarser than the set");
  if (level > kMaxCubeLevel) throw Error(Errc::depth, "dilation grid too fine");
  const std::uint64_t top = (std::uint64_t{1} << level) - 1;
  SetPtr acc = emptyNode();
  for (const DyadicCube& c : cubes()) {
    const unsigned shift = level - c.level;
    std::vector<std::uint64_t> lo(dim_), hi(dim_);
    for (unsigned j = 0; j < dim_; ++j) {
      const std::uint64_t first = c.index[j] << shift;
      lo[j] = first == 0 ? 0 : first - 1;
      hi[j] = std::min(top, first + (std::uint64_t{1} << shift));
    }
    acc = combine(acc, boxNode(DyadicCube::unit(dim_), level, lo, hi), SetOp::unite, 1u << dim_);
  }
  return DyadicCubeSet(dim_, acc);
}

bool operator==(const DyadicCubeSet& a, const DyadicCubeSet& b) {
  return a.dim_ == b.dim_ && sameTree(a.root_, b.root_);
}

// ------------------------------------------------------- cube step functions

namespace {

using FnNode = CubeStepFn::Node;
using FnPtr = CubeStepFn::NodePtr;

FnPtr leaf(Rat v) { return std::make_shared<const FnNode>(FnNode{std::move(v), {}}); }

FnPtr makeFnSplit(std::vector<FnPtr> kids) {
  const bool mergeable = std::all_of(kids.begin(), kids.end(), [&](const FnPtr& c) {
    return c->children.empty() && c->value == kids[0]->value;
  });
  if (mergeable) return kids[0];
  return std::make_shared<const FnNode>(FnNode{Rat(0), std::move(kids)});
}

const FnPtr& fnChild(const FnPtr& n, unsigned c) { return n->children.empty() ? n : n->children[c]; }

template <class Op>
FnPtr zipWith(const FnPtr& a, const FnPtr& b, unsigned arity, const Op& op) {
  if (a->children.empty() && b->children.empty()) return leaf(op(a->value, b->value));
  std::vector<FnPtr> kids(arity);
  for (unsigned c = 0; c < arity; ++c) kids[c] = zipWith(fnChild(a, c), fnChild(b, c), arity, op);
  return makeFnSplit(std::move(kids));
}

template <class Op>
FnPtr mapLeaves(const FnPtr& a, const Op& op) {
  if (a->children.empty()) return leaf(op(a->value));
  std::vector<FnPtr> kids;
  for (const auto& c : a->children) kids.push_back(mapLeaves(c, op));
  return makeFnSplit(std::move(kids));
}

template <class Leaf>
Rat sumLeaves(const FnPtr& n, unsigned dim, unsigned level, const Leaf& f) {
  if (n->children.empty()) return f(n->value) * cellVolume(dim, level);
  Rat s;
  for (const auto& c : n->children) s += sumLeaves(c, dim, level + 1, f);
  return s;
}

}  // namespace

CubeStepFn::CubeStepFn(unsigned dim, const Rat& c) : dim_(dim), root_(leaf(c)) { requireDim(dim); }

CubeStepFn CubeStepFn::indicator(const DyadicCubeSet& s, const Rat& value) {
  std::function<FnPtr(const SetPtr&)> go = [&](const SetPtr& n) -> FnPtr {
    if (n->kind == SetNode::Kind::empty) return leaf(Rat(0));
    if (n->kind == SetNode::Kind::full) return leaf(value);
    std::vector<FnPtr> kids;
    for (const auto& c : n->children) kids.push_back(go(c));
    return makeFnSplit(std::move(kids));
  };
  return CubeStepFn(s.dim(), go(s.root()));
}

CubeStepFn CubeStepFn::fromPiecewise(const PiecewiseFn& f) {
  if (f.mode() != PieceMode::step) throw Error(Errc::unsupported_class, "only step functions are cube step functions");
  const auto& b = f.breakpoints();
  std::function<FnPtr(const Rat&, const Rat&, unsigned)> go = [&](const Rat& lo, const Rat& hi, unsigned level) {
    const std::size_t i = f.segmentOf(lo);
    if (hi <= b[i + 1]) return leaf(f.values()[i]);
    if (level >= kMaxCubeLevel) throw Error(Errc::depth, "breakpoints too fine");
    const Rat mid = (lo + hi) / Rat(2);
    return makeFnSplit({go(lo, mid, level + 1), go(mid, hi, level + 1)});
  };
  return CubeStepFn(1, go(Rat(0), Rat(1), 0));
}

PiecewiseFn CubeStepFn::toPiecewise() const {
  if (dim_ != 1) throw Error(Errc::dimension, "toPiecewise needs dimension 1");
  std::vector<Rat> b, v;
  std::function<void(const FnPtr&, const Rat&, const Rat&)> go = [&](const FnPtr& n, const Rat& lo, const Rat& hi) {
    if (n->children.empty()) {
      b.push_back(lo);
      v.push_back(n->value);
      return;
    }
    const Rat mid = (lo + hi) / Rat(2);
    go(n->children[0], lo, mid);
    go(n->children[1], mid, hi);
  };
  go(root_, Rat(0), Rat(1));
  b.push_back(Rat(1));
  return PiecewiseFn::step(std::move(b), std::move(v)).simplified();
}

CubeStepFn operator+(const CubeStepFn& a, const CubeStepFn& b) {
  requireSameDim(a.dim_, b.dim_);
  return CubeStepFn(a.dim_, zipWith(a.root_, b.root_, 1u << a.dim_, [](const Rat& x, const Rat& y) { return x + y; }));
}

CubeStepFn CubeStepFn::scaled(const Rat& c) const {
  return CubeStepFn(dim_, mapLeaves(root_, [&](const Rat& x) { return x * c; }));
}

CubeStepFn CubeStepFn::abs() const {
  return CubeStepFn(dim_, mapLeaves(root_, [](const Rat& x) { return x.abs(); }));
}

Rat CubeStepFn::operator()(const CubePoint& z) const {
  requireSameDim(z.dim(), dim_);
  std::function<Rat(const FnPtr&, const DyadicCube&)> go = [&](const FnPtr& n, const DyadicCube& cell) -> Rat {
    if (n->children.empty()) return n->value;
    const auto cands = candidateChildren(z, cell);
    Rat first = go(n->children[cands[0]], cell.child(cands[0]));
    for (std::size_t i = 1; i < cands.size(); ++i) {
      if (go(n->children[cands[i]], cell.child(cands[i])) != first) {
        throw Error(Errc::boundary, "point lies on a face between different values");
      }
    }
    return first;
  };
  return go(root_, DyadicCube::unit(dim_));
}

Rat CubeStepFn::integral() const {
  return sumLeaves(root_, dim_, 0, [](const Rat& v) { return v; });
}

Rat CubeStepFn::integralOver(const DyadicCubeSet& s) const {
  requireSameDim(s.dim(), dim_);
  std::function<Rat(const FnPtr&, const SetPtr&, unsigned)> go = [&](const FnPtr& f, const SetPtr& n,
                                                                     unsigned level) -> Rat {
    if (n->kind == SetNode::Kind::empty) return Rat(0);
    if (n->kind == SetNode::Kind::full) return sumLeaves(f, dim_, level, [](const Rat& v) { return v; });
    if (f->children.empty()) return f->value * DyadicCubeSet(dim_, n).measure() * cellVolume(dim_, level);
    Rat sum;
    for (unsigned c = 0; c < n->children.size(); ++c) sum += go(f->children[c], n->children[c], level + 1);
    return sum;
  };
  return go(root_, s.root(), 0);
}

Rat CubeStepFn::integralAbsPow(const Rat& p) const {
  return sumLeaves(root_, dim_, 0, [&](const Rat& v) { return v.isZero() ? Rat(0) : requireExactPow(v, p); });
}

Rat CubeStepFn::supAbs() const {
  Rat best;
  std::function<void(const FnPtr&)> go = [&](const FnPtr& n) {
    if (n->children.empty()) best = max(best, n->value.abs());
    for (const auto& c : n->children) go(c);
  };
  go(root_);
  return best;
}

}  // namespace lipx
