// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <set>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "rwcap/lattice.hpp"
#include "rwcap/rng.hpp"

using namespace rwcap;

TEST_SUITE("lattice") {

TEST_CASE("key packer round-trips every coordinate pattern") {
  for (int d : {1, 2, 3, 5, 7, 10}) {
    KeyPacker pk(d);
    CHECK(pk.coord_bound() >= 2046);  // d <= 10 keeps lanes wide
    CounterRng rng(7, d);
    Coord c[kMaxDim], back[kMaxDim];
    for (int rep = 0; rep < 200; ++rep) {
      for (int j = 0; j < d; ++j) {
        c[j] = Coord(rng.uniform_int(std::uint32_t(2 * pk.coord_bound() + 1))) - pk.coord_bound();
      }
      pk.unpack(pk.pack(c), back);
      for (int j = 0; j < d; ++j) CHECK(back[j] == c[j]);
    }
    // extremes round-trip, one past throws
    for (int j = 0; j < d; ++j) c[j] = (j % 2) ? pk.coord_bound() : -pk.coord_bound();
    pk.unpack(pk.pack(c), back);
    for (int j = 0; j < d; ++j) CHECK(back[j] == c[j]);
    c[0] = pk.coord_bound() + 1;
    CHECK_THROWS_AS((void)pk.pack(c), std::out_of_range);
  }
}

TEST_CASE("lane_unit matches repacking a unit move") {
  KeyPacker pk(5);
  Coord c[5] = {3, -2, 0, 7, -5};
  for (int axis = 0; axis < 5; ++axis) {
    Coord m[5];
    std::copy(c, c + 5, m);
    ++m[axis];
    CHECK(pk.pack(c) + pk.lane_unit(axis) == pk.pack(m));
    m[axis] -= 2;
    CHECK(pk.pack(c) - pk.lane_unit(axis) == pk.pack(m));
  }
}

TEST_CASE("point set agrees with std::set on random churn") {
  const int d = 4;
  PointSet ps(d);
  std::set<std::vector<Coord>> ref;
  CounterRng rng(11, 0);
  for (int i = 0; i < 5000; ++i) {
    std::vector<Coord> v(d);
    for (auto& x : v) x = Coord(rng.uniform_int(9)) - 4;
    bool inserted = ps.insert(v.data());
    CHECK(inserted == ref.insert(v).second);
  }
  CHECK(ps.size() == ref.size());
  for (const auto& v : ref) CHECK(ps.contains(v.data()));
  std::vector<Coord> probe(d, 6);  // outside the churn box
  CHECK(!ps.contains(probe.data()));
  std::size_t seen = 0;
  ps.for_each([&](const Coord* c) {
    ++seen;
    CHECK(ref.count(std::vector<Coord>(c, c + d)) == 1);
  });
  CHECK(seen == ref.size());
}

TEST_CASE("sorted_points is lexicographic and stable across insert order") {
  PointSet a(3), b(3);
  std::vector<LatticePoint> pts = {{1, 0, 0}, {-1, 2, 3}, {0, 0, 0}, {1, -1, 5}, {0, 2, -2}};
  for (const auto& p : pts) a.insert(p);
  for (auto it = pts.rbegin(); it != pts.rend(); ++it) b.insert(*it);
  auto sa = a.sorted_points(), sb = b.sorted_points();
  REQUIRE(sa.size() == pts.size());
  CHECK(std::is_sorted(sa.begin(), sa.end()));
  CHECK(sa == sb);
}

TEST_CASE("point count accumulates multiplicities") {
  PointCount pc(2);
  LatticePoint p{1, 2}, q{-3, 0};
  pc.add(p);
  pc.add(p, 4);
  pc.add(q);
  CHECK(pc.count(p) == 5);
  CHECK(pc.count(q) == 1);
  CHECK(pc.count(LatticePoint{0, 0}) == 0);
  CHECK(pc.total() == 6);
  CHECK(pc.size() == 2);
}

TEST_CASE("geometry helpers") {
  PointSet s = make_point_set(2, {LatticePoint{0, 0}, LatticePoint{4, 0}, LatticePoint{0, 3}});
  CHECK(s.diameter() == doctest::Approx(5.0));
  auto c = s.centroid_rounded();
  CHECK(c[0] == 1);
  CHECK(c[1] == 1);
  CHECK(s.radius_about(LatticePoint{0, 0}) == doctest::Approx(4.0));
}

TEST_CASE("serialization golden format and round-trip") {
  PointSet s = make_point_set(
      5, {LatticePoint{1, 0, 0, 0, 0}, LatticePoint{-1, 2, 0, 0, 1}, LatticePoint{0, 0, 0, 0, 0}});
  std::ostringstream os;
  write_point_set(os, s);
  CHECK(os.str() == "d=5\n-1 2 0 0 1\n0 0 0 0 0\n1 0 0 0 0\n");

  std::istringstream is("# comment\n d=5\n\n0 0 0 0 0\n-1 2 0 0 1 # inline\n\n1 0 0 0 0\n");
  PointSet r = read_point_set(is);
  CHECK(r.size() == 3);
  for (const auto& p : s.sorted_points()) CHECK(r.contains(p));

  std::istringstream bad("d=5\n1 2 3\n");
  CHECK_THROWS(read_point_set(bad));
  std::istringstream nohdr("0 0\n");
  CHECK_THROWS(read_point_set(nohdr));
}

TEST_CASE("lattice point arithmetic and ordering") {
  LatticePoint a{1, -2, 3}, b{0, 5, -1};
  CHECK((a + b) == LatticePoint{1, 3, 2});
  CHECK((a - b) == LatticePoint{1, -7, 4});
  CHECK((-a) == LatticePoint{-1, 2, -3});
  CHECK(a.norm2() == 14);
  CHECK(a.max_abs() == 3);
  CHECK(LatticePoint{0, 0, 0} < a);
  CHECK(!(a < LatticePoint{0, 0, 0}));
  CHECK(LatticePoint::unit(3, 1, -2) == LatticePoint{0, -2, 0});
  CHECK_THROWS(LatticePoint::unit(3, 3));
}

}  // TEST_SUITE
