// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <initializer_list>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace rwcap {

using Coord = std::int32_t;

inline constexpr int kMaxDim = 10;

namespace detail {

inline constexpr std::uint64_t hash_mix(std::uint64_t z) noexcept {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

}  // namespace detail

inline void check_dim(int dim) {
  if (dim < 1 || dim > kMaxDim)
    throw std::invalid_argument("dimension must be in [1," + std::to_string(kMaxDim) + "]");
}

// A point of Z^d for runtime d <= kMaxDim. Value type, cheap to copy.
class LatticePoint {
 public:
  LatticePoint() = default;

  explicit LatticePoint(int dim) : dim_(dim) { check_dim(dim); }

  LatticePoint(std::initializer_list<Coord> cs) : dim_(static_cast<int>(cs.size())) {
    check_dim(dim_);
    int j = 0;
    for (Coord c : cs) c_[j++] = c;
  }

  LatticePoint(int dim, const Coord* cs) : dim_(dim) {
    check_dim(dim);
    for (int j = 0; j < dim; ++j) c_[j] = cs[j];
  }

  static LatticePoint origin(int dim) { return LatticePoint(dim); }

  static LatticePoint unit(int dim, int axis, Coord scale = 1) {
    LatticePoint p(dim);
    if (axis < 0 || axis >= dim) throw std::invalid_argument("axis out of range");
    p.c_[axis] = scale;
    return p;
  }

  int dim() const noexcept { return dim_; }
  Coord operator[](int j) const noexcept { return c_[j]; }
  Coord& operator[](int j) noexcept { return c_[j]; }
  const Coord* data() const noexcept { return c_.data(); }
  Coord* data() noexcept { return c_.data(); }

  std::int64_t norm2() const noexcept {
    std::int64_t s = 0;
    for (int j = 0; j < dim_; ++j) s += std::int64_t(c_[j]) * c_[j];
    return s;
  }
  double norm() const noexcept { return std::sqrt(double(norm2())); }

  Coord max_abs() const noexcept {
    Coord m = 0;
    for (int j = 0; j < dim_; ++j) {
      Coord a = c_[j] < 0 ? -c_[j] : c_[j];
      if (a > m) m = a;
    }
    return m;
  }

  LatticePoint& operator+=(const LatticePoint& o) noexcept {
    for (int j = 0; j < dim_; ++j) c_[j] += o.c_[j];
    return *this;
  }
  LatticePoint& operator-=(const LatticePoint& o) noexcept {
    for (int j = 0; j < dim_; ++j) c_[j] -= o.c_[j];
    return *this;
  }
  friend LatticePoint operator+(LatticePoint a, const LatticePoint& b) { return a += b; }
  friend LatticePoint operator-(LatticePoint a, const LatticePoint& b) { return a -= b; }
  friend LatticePoint operator-(LatticePoint a) {
    for (int j = 0; j < a.dim_; ++j) a.c_[j] = -a.c_[j];
    return a;
  }

  friend bool operator==(const LatticePoint& a, const LatticePoint& b) {
    if (a.dim_ != b.dim_) return false;
    for (int j = 0; j < a.dim_; ++j)
      if (a.c_[j] != b.c_[j]) return false;
    return true;
  }
  friend bool operator!=(const LatticePoint& a, const LatticePoint& b) { return !(a == b); }

  // Lexicographic; the canonical order for serialized sets and kernel rows.
  friend bool operator<(const LatticePoint& a, const LatticePoint& b) {
    if (a.dim_ != b.dim_) return a.dim_ < b.dim_;
    for (int j = 0; j < a.dim_; ++j)
      if (a.c_[j] != b.c_[j]) return a.c_[j] < b.c_[j];
    return false;
  }

  std::string to_string() const;

 private:
  std::array<Coord, kMaxDim> c_{};
  int dim_ = 0;
};

// Packs a d-tuple into a 128-bit key, one fixed-width signed lane per
// coordinate. Lane width is min(31, 126/d) bits, so the packing is lossless
// up to |coord| <= coord_bound() and two valid keys are equal iff the points
// are. Key halves stay below 2^63, leaving all-ones free as a table sentinel.
class KeyPacker {
 public:
  using Key = unsigned __int128;

  KeyPacker() = default;
  explicit KeyPacker(int dim) : dim_(dim) {
    check_dim(dim);
    width_ = 126 / dim;
    if (width_ > 31) width_ = 31;
    offset_ = (Coord(1) << (width_ - 1)) - 1;
  }

  int dim() const noexcept { return dim_; }
  Coord coord_bound() const noexcept { return offset_ - 1; }

  Key pack(const Coord* c) const {
    Key k = 0;
    for (int j = dim_ - 1; j >= 0; --j) {
      Coord v = c[j];
      if (v > coord_bound() || v < -coord_bound())
        throw std::out_of_range("coordinate " + std::to_string(v) +
                                " exceeds packing bound " + std::to_string(coord_bound()) +
                                " for dimension " + std::to_string(dim_));
      k = (k << width_) | Key(std::uint32_t(v + offset_));
    }
    return k;
  }

  void unpack(Key k, Coord* c) const noexcept {
    const Key mask = (Key(1) << width_) - 1;
    for (int j = 0; j < dim_; ++j) {
      c[j] = Coord(std::uint32_t(k & mask)) - offset_;
      k >>= width_;
    }
  }

  // Key increment for a +-1 move along `axis`; valid while the moved
  // coordinate stays within bounds (callers must check coord_bound()).
  Key lane_unit(int axis) const noexcept { return Key(1) << (width_ * axis); }

  static std::uint64_t hash(Key k) noexcept {
    auto lo = static_cast<std::uint64_t>(k);
    auto hi = static_cast<std::uint64_t>(k >> 64);
    return detail::hash_mix(lo ^ detail::hash_mix(hi + 0x9E3779B97F4A7C15ull));
  }

 private:
  int dim_ = 0;
  int width_ = 0;
  Coord offset_ = 0;
};

// Open-addressing hash set of lattice points (insert and lookup only, no
// erase). The workhorse behind walk ranges, Minkowski sums and tree ranges.
class PointSet {
 public:
  using Key = KeyPacker::Key;

  PointSet() = default;
  explicit PointSet(int dim, std::size_t expected = 0) : packer_(dim) { rehash_for(expected); }

  int dim() const noexcept { return packer_.dim(); }
  const KeyPacker& packer() const noexcept { return packer_; }
  std::size_t size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }

  void clear() noexcept {
    for (auto& s : slots_) s = kEmpty;
    size_ = 0;
  }

  void reserve(std::size_t expected) { rehash_for(expected); }

  bool insert(const LatticePoint& p) { return insert_key(packer_.pack(p.data())); }
  bool insert(const Coord* c) { return insert_key(packer_.pack(c)); }

  bool insert_key(Key k) {
    if ((size_ + 1) * 100 > slots_.size() * kMaxLoadPct) grow();
    return insert_no_grow(k);
  }

  bool contains(const LatticePoint& p) const { return contains_key(packer_.pack(p.data())); }
  bool contains(const Coord* c) const { return contains_key(packer_.pack(c)); }

  bool contains_key(Key k) const noexcept {
    if (slots_.empty()) return false;
    std::size_t mask = slots_.size() - 1;
    std::size_t i = KeyPacker::hash(k) & mask;
    while (true) {
      Key s = slots_[i];
      if (s == kEmpty) return false;
      if (s == k) return true;
      i = (i + 1) & mask;
    }
  }

  template <class F>
  void for_each_key(F&& f) const {
    for (Key s : slots_)
      if (s != kEmpty) f(s);
  }

  template <class F>
  void for_each(F&& f) const {
    Coord buf[kMaxDim];
    for (Key s : slots_) {
      if (s != kEmpty) {
        packer_.unpack(s, buf);
        f(static_cast<const Coord*>(buf));
      }
    }
  }

  std::vector<LatticePoint> points() const;         // unspecified order
  std::vector<LatticePoint> sorted_points() const;  // lexicographic

  // Geometry helpers used by estimators.
  LatticePoint centroid_rounded() const;
  double radius_about(const LatticePoint& center) const;
  double diameter() const;  // max pairwise Euclidean distance, O(size^2)

 private:
  static constexpr Key kEmpty = ~Key(0);
  static constexpr std::size_t kMaxLoadPct = 65;

  void rehash_for(std::size_t expected) {
    std::size_t want = 16;
    while (want * kMaxLoadPct < (expected + 1) * 100) want <<= 1;
    if (want > slots_.size()) rehash(want);
  }

  void grow() { rehash(slots_.empty() ? 16 : slots_.size() * 2); }

  void rehash(std::size_t n) {
    std::vector<Key> old;
    old.swap(slots_);
    slots_.assign(n, kEmpty);
    size_ = 0;
    for (Key s : old)
      if (s != kEmpty) insert_no_grow(s);
  }

  bool insert_no_grow(Key k) noexcept {
    std::size_t mask = slots_.size() - 1;
    std::size_t i = KeyPacker::hash(k) & mask;
    while (true) {
      Key s = slots_[i];
      if (s == kEmpty) {
        slots_[i] = k;
        ++size_;
        return true;
      }
      if (s == k) return false;
      i = (i + 1) & mask;
    }
  }

  KeyPacker packer_;
  std::vector<Key> slots_;
  std::size_t size_ = 0;
};

// Open-addressing hash map from lattice points to counts (occupation maps,
// local times).
class PointCount {
 public:
  using Key = KeyPacker::Key;

  PointCount() = default;
  explicit PointCount(int dim, std::size_t expected = 0) : packer_(dim) { rehash_for(expected); }

  int dim() const noexcept { return packer_.dim(); }
  const KeyPacker& packer() const noexcept { return packer_; }
  std::size_t size() const noexcept { return size_; }

  void add(const LatticePoint& p, std::uint64_t w = 1) { add_key(packer_.pack(p.data()), w); }
  void add(const Coord* c, std::uint64_t w = 1) { add_key(packer_.pack(c), w); }

  void add_key(Key k, std::uint64_t w = 1) {
    if ((size_ + 1) * 100 > keys_.size() * 65) grow();
    std::size_t mask = keys_.size() - 1;
    std::size_t i = KeyPacker::hash(k) & mask;
    while (true) {
      Key s = keys_[i];
      if (s == kEmpty) {
        keys_[i] = k;
        vals_[i] = w;
        ++size_;
        return;
      }
      if (s == k) {
        vals_[i] += w;
        return;
      }
      i = (i + 1) & mask;
    }
  }

  std::uint64_t count(const LatticePoint& p) const { return count_key(packer_.pack(p.data())); }
  std::uint64_t count(const Coord* c) const { return count_key(packer_.pack(c)); }

  std::uint64_t count_key(Key k) const noexcept {
    if (keys_.empty()) return 0;
    std::size_t mask = keys_.size() - 1;
    std::size_t i = KeyPacker::hash(k) & mask;
    while (true) {
      Key s = keys_[i];
      if (s == kEmpty) return 0;
      if (s == k) return vals_[i];
      i = (i + 1) & mask;
    }
  }

  template <class F>
  void for_each(F&& f) const {
    Coord buf[kMaxDim];
    for (std::size_t i = 0; i < keys_.size(); ++i) {
      if (keys_[i] != kEmpty) {
        packer_.unpack(keys_[i], buf);
        f(static_cast<const Coord*>(buf), vals_[i]);
      }
    }
  }

  std::uint64_t total() const noexcept {
    std::uint64_t t = 0;
    for (std::size_t i = 0; i < keys_.size(); ++i)
      if (keys_[i] != kEmpty) t += vals_[i];
    return t;
  }

 private:
  static constexpr Key kEmpty = ~Key(0);

  void rehash_for(std::size_t expected) {
    std::size_t want = 16;
    while (want * 65 < (expected + 1) * 100) want <<= 1;
    if (want > keys_.size()) rehash(want);
  }

  void grow() { rehash(keys_.empty() ? 16 : keys_.size() * 2); }

  void rehash(std::size_t n) {
    std::vector<Key> ok;
    std::vector<std::uint64_t> ov;
    ok.swap(keys_);
    ov.swap(vals_);
    keys_.assign(n, kEmpty);
    vals_.assign(n, 0);
    size_ = 0;
    for (std::size_t i = 0; i < ok.size(); ++i)
      if (ok[i] != kEmpty) add_key(ok[i], ov[i]);
  }

  KeyPacker packer_;
  std::vector<Key> keys_;
  std::vector<std::uint64_t> vals_;
  std::size_t size_ = 0;
};

PointSet make_point_set(int dim, std::initializer_list<LatticePoint> pts);
PointSet make_point_set(const std::vector<LatticePoint>& pts);

// Text format: first line "d=<dim>", then one point per line as
// space-separated integers, in lexicographic order. Reading accepts any
// order and blank lines; '#' starts a comment.
void write_point_set(std::ostream& os, const PointSet& s);
PointSet read_point_set(std::istream& is);
void save_point_set(const std::string& path, const PointSet& s);
PointSet load_point_set(const std::string& path);

}  // namespace rwcap
