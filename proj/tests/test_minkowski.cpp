// SPDX-License-Identifier: Apache-2.0
#include <set>
#include <vector>

#include "doctest.h"
#include "rwcap/minkowski.hpp"
#include "rwcap/rng.hpp"

using namespace rwcap;

namespace {

PointSet random_set(int d, std::size_t size, Coord box, CounterRng& rng) {
  PointSet s(d, size);
  while (s.size() < size) {
    LatticePoint p(d);
    for (int j = 0; j < d; ++j)
      p[j] = Coord(rng.uniform_int(std::uint32_t(2 * box + 1))) - box;
    s.insert(p);
  }
  return s;
}

std::set<std::vector<Coord>> brute_sum(const PointSet& a, const PointSet& b) {
  std::set<std::vector<Coord>> out;
  auto pa = a.points(), pb = b.points();
  for (const auto& p : pa) {
    for (const auto& q : pb) {
      std::vector<Coord> v(std::size_t(a.dim()));
      for (int j = 0; j < a.dim(); ++j) v[std::size_t(j)] = p[j] + q[j];
      out.insert(v);
    }
  }
  return out;
}

}  // namespace

TEST_SUITE("minkowski") {

TEST_CASE("sum matches the brute-force oracle on random sets") {
  CounterRng rng(101, 0);
  for (int d : {2, 3, 5}) {
    for (int rep = 0; rep < 6; ++rep) {
      PointSet a = random_set(d, 3 + rng.uniform_int(20), 5, rng);
      PointSet b = random_set(d, 3 + rng.uniform_int(20), 5, rng);
      auto ref = brute_sum(a, b);
      PointSet got = minkowski_sum(a, b);
      CHECK(got.size() == ref.size());
      for (const auto& v : ref) CHECK(got.contains(v.data()));
    }
  }
}

TEST_CASE("algebraic identities") {
  CounterRng rng(102, 0);
  PointSet a = random_set(3, 12, 4, rng);
  PointSet zero = make_point_set(3, {LatticePoint::origin(3)});
  PointSet a0 = minkowski_sum(a, zero);
  CHECK(a0.size() == a.size());
  a.for_each([&](const Coord* c) { CHECK(a0.contains(c)); });

  // commutative and associative (as sets)
  PointSet b = random_set(3, 9, 4, rng);
  PointSet c = random_set(3, 7, 4, rng);
  CHECK(minkowski_sum(a, b).size() == minkowski_sum(b, a).size());
  PointSet left = minkowski_sum(minkowski_sum(a, b), c);
  PointSet right = minkowski_sum(a, minkowski_sum(b, c));
  CHECK(left.size() == right.size());
  right.for_each([&](const Coord* x) { CHECK(left.contains(x)); });

  // translation invariance of the volume
  PointSet bshift(3, b.size());
  b.for_each([&](const Coord* x) {
    Coord y[3] = {Coord(x[0] + 7), Coord(x[1] - 2), Coord(x[2] + 1)};
    bshift.insert(y);
  });
  CHECK(minkowski_sum(a, bshift).size() == minkowski_sum(a, b).size());
}

TEST_CASE("sausage volume folds any number of factors") {
  CounterRng rng(103, 0);
  PointSet a = random_set(3, 10, 3, rng);
  PointSet b = random_set(3, 8, 3, rng);
  PointSet c = random_set(3, 6, 3, rng);
  PointSet direct = minkowski_sum(minkowski_sum(a, b), c);
  CHECK(sausage_volume({&a, &b, &c}) == direct.size());
  CHECK(sausage_volume({&c, &a, &b}) == direct.size());  // order free
  CHECK(sausage_volume({&a}) == a.size());

  PointSet empty(3);
  CHECK(sausage_volume({&a, &empty}) == 0);

  CHECK_THROWS_AS((void)sausage_volume({&a, &b, &c}, 10), std::length_error);
  CHECK_THROWS(sausage_volume({}));
  PointSet other(2);
  other.insert(LatticePoint{0, 0});
  CHECK_THROWS(sausage_volume({&a, &other}));
}

}  // TEST_SUITE
