// SPDX-License-Identifier: Apache-2.0
#include "rwcap/hitting.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "rwcap/bcap.hpp"
#include "rwcap/bushfield.hpp"
#include "rwcap/capacity.hpp"
#include "rwcap/green.hpp"
#include "rwcap/minkowski.hpp"
#include "rwcap/walk.hpp"

namespace rwcap {

namespace {

// sup_v of the N-fold transition mass carried by time tuples with some
// index beyond T. Tuples with total time M contribute at most
// binom(M+N-1, N-1) p_M(v), every missing tuple has M > T, and
// p_M(v) <= 2 (d/2pi)^{d/2} M^{-d/2} (parity-doubled local CLT sup), so the
// tail integrates to T^{N-d/2} / ((d/2-N)(N-1)!) with a 1.5 pad for the
// sum-to-integral comparison.
double tuple_tail_sup(int d, int N, double T) {
  if (d <= 2 * N) throw std::invalid_argument("tuple_tail_sup: needs d > 2N");
  T = std::max(T, 1.0);
  double B = 2.0 * std::pow(d / (2.0 * std::numbers::pi), 0.5 * d);
  double fact = 1.0;
  for (int i = 2; i <= N - 1; ++i) fact *= i;
  return 1.5 * B * std::pow(T, N - 0.5 * d) / ((0.5 * d - N) * fact);
}

std::uint64_t auto_hit_horizon(const LatticePoint& z) {
  return std::max<std::uint64_t>(100, std::uint64_t(100.0 * double(z.norm2())));
}

double ls_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  std::size_t n = xs.size();
  if (n < 2) return std::numeric_limits<double>::quiet_NaN();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  double den = double(n) * sxx - sx * sx;
  if (den <= 0) return std::numeric_limits<double>::quiet_NaN();
  return (double(n) * sxy - sx * sy) / den;
}

}  // namespace

WalkHitResult hit_prob_sum_walks(int d, int N, const PointSet& a, const LatticePoint& z,
                                 std::uint64_t replicas, SeedSpec seed, std::uint64_t horizon,
                                 int workers) {
  if (N < 1) throw std::invalid_argument("hit_prob_sum_walks: N must be >= 1");
  if (d <= 2 * N) throw std::invalid_argument("hit_prob_sum_walks: needs d > 2N");
  if (a.empty() || a.dim() != d || z.dim() != d)
    throw std::invalid_argument("hit_prob_sum_walks: bad target set or start");
  if (replicas == 0) throw std::invalid_argument("hit_prob_sum_walks: no replicas");

  const std::uint64_t T = horizon ? horizon : auto_hit_horizon(z);
  const KeyPacker pk(d);
  const Coord bound = pk.coord_bound();

  // targets in walk coordinates: the walk sum starts at 0, so it hits A
  // from z exactly when it reaches some alpha - z
  std::vector<LatticePoint> targets;
  for (const auto& s : a.sorted_points()) targets.push_back(s - z);
  std::vector<KeyPacker::Key> target_keys;
  for (const auto& t : targets) target_keys.push_back(pk.pack(t.data()));

  auto one = [&](std::uint64_t, CounterRng& rng) -> double {
    if (N == 1) {
      WalkCursor w(LatticePoint::origin(d));
      auto probe = [&]() {
        for (auto k : target_keys)
          if (k == w.key()) return true;
        return false;
      };
      if (probe()) return 1.0;
      for (std::uint64_t t = 0; t < T; ++t) {
        w.step(rng);
        if (probe()) return 1.0;
      }
      return 0.0;
    }
    if (N == 2) {
      // hash the first range, stream the second: a hit needs
      // X^1_s = alpha - z - X^2_t for some alpha
      PointSet r1 = walk_range(d, T, rng);
      WalkCursor w(LatticePoint::origin(d));
      Coord diff[kMaxDim];
      auto probe = [&]() {
        const Coord* c = w.coords();
        for (const auto& t : targets) {
          bool in_box = true;
          for (int j = 0; j < d; ++j) {
            diff[j] = t[j] - c[j];
            if (diff[j] > bound || diff[j] < -bound) {
              in_box = false;  // outside the packable box, so outside r1
              break;
            }
          }
          if (in_box && r1.contains(diff)) return true;
        }
        return false;
      };
      if (probe()) return 1.0;
      for (std::uint64_t t = 0; t < T; ++t) {
        w.step(rng);
        if (probe()) return 1.0;
      }
      return 0.0;
    }
    // N >= 3: fold the stage sets S_i = S_{i-1} - R^i and stream the last
    // walk. Stage sizes scale like |A| T^{i}, so this route is only usable
    // at small horizons.
    PointSet s(d, targets.size());
    for (const auto& t : targets) s.insert(t);
    for (int i = 1; i <= N - 1; ++i) {
      PointSet ri = walk_range(d, T, rng);
      PointSet neg(d, ri.size());
      Coord buf[kMaxDim];
      ri.for_each([&](const Coord* c) {
        for (int j = 0; j < d; ++j) buf[j] = -c[j];
        neg.insert(buf);
      });
      PointSet next(d, s.size() * (ri.size() / 2 + 1));
      minkowski_sum_into(next, s, neg);
      s = std::move(next);
      if (s.size() > 20'000'000)
        throw std::length_error("hit_prob_sum_walks: stage set too large; lower the horizon");
    }
    WalkCursor w(LatticePoint::origin(d));
    Coord cbuf[kMaxDim];
    auto probe = [&]() {
      const Coord* c = w.coords();
      bool in_box = true;
      for (int j = 0; j < d; ++j) {
        cbuf[j] = c[j];
        if (cbuf[j] > bound || cbuf[j] < -bound) in_box = false;
      }
      return in_box && s.contains(cbuf);
    };
    if (probe()) return 1.0;
    for (std::uint64_t t = 0; t < T; ++t) {
      w.step(rng);
      if (probe()) return 1.0;
    }
    return 0.0;
  };

  auto vals = replicate<double>(replicas, seed, one, workers);
  std::uint64_t hits = 0;
  for (double v : vals) hits += v > 0.5 ? 1 : 0;

  // truncation can only lose hits; bound the missed mass per target
  double tail = std::min(1.0, double(a.size()) * tuple_tail_sup(d, N, double(T)));
  WalkHitResult out;
  out.prob = bernoulli_estimate(hits, replicas, 0.0, tail);
  out.horizon = T;
  return out;
}

KsRatioResult ks_ratio_experiment(int d, int N, const PointSet& a,
                                  const std::vector<double>& shells,
                                  const std::vector<std::uint64_t>& replicas, SeedSpec seed,
                                  int workers) {
  if (shells.empty() || shells.size() != replicas.size())
    throw std::invalid_argument("ks_ratio_experiment: shells/replicas mismatch");
  if (d <= 2 * N) throw std::invalid_argument("ks_ratio_experiment: needs d > 2N");

  KsRatioResult out;
  out.cap_low = cap_gamma(d, double(d - 2 * N), a).value;

  std::uint64_t offset = 0;
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < shells.size(); ++i) {
    if (shells[i] < 1.0) throw std::invalid_argument("ks_ratio_experiment: shell must be >= 1");
    LatticePoint z = LatticePoint::unit(d, 0, Coord(std::llround(shells[i])));
    auto hit = hit_prob_sum_walks(d, N, a, z, replicas[i], seed.at(offset), 0, workers);
    offset += replicas[i];

    ShellHit row;
    row.shell = z.norm();
    row.z = z;
    row.prob = hit.prob;
    row.censored = hit.prob.mean <= 0.0;
    row.ratio = row.censored ? 0.0 : row.shell * hit.prob.mean / out.cap_low;
    if (!row.censored) {
      lx.push_back(std::log(row.shell));
      ly.push_back(std::log(hit.prob.mean));
    }
    out.rows.push_back(std::move(row));
  }

  out.slope = ls_slope(lx, ly);
  double rmin = std::numeric_limits<double>::infinity(), rmax = 0.0;
  for (const auto& r : out.rows) {
    if (r.censored) continue;
    rmin = std::min(rmin, r.ratio);
    rmax = std::max(rmax, r.ratio);
  }
  out.band_max_over_min = (rmin > 0 && std::isfinite(rmin)) ? rmax / rmin
                                                            : std::numeric_limits<double>::quiet_NaN();
  return out;
}

EquivResult intersection_equivalence(const OffspringLaw& law, const PointSet& a,
                                     const std::vector<double>& shells,
                                     const std::vector<std::uint64_t>& tree_replicas,
                                     const std::vector<std::uint64_t>& walk_replicas,
                                     SeedSpec seed, double spine_scale, int workers) {
  if (shells.empty() || shells.size() != tree_replicas.size() ||
      shells.size() != walk_replicas.size())
    throw std::invalid_argument("intersection_equivalence: shells/replicas mismatch");
  const int d = a.dim();
  if (d != 5) throw std::invalid_argument("intersection_equivalence: d = 5 only");

  BushField field(law, a);

  EquivResult out;
  out.field_rel_error = field.field_rel_error();
  std::uint64_t offset = 0;
  double rmin = std::numeric_limits<double>::infinity(), rmax = 0.0;
  for (std::size_t i = 0; i < shells.size(); ++i) {
    LatticePoint x = LatticePoint::unit(d, 0, Coord(std::llround(shells[i])));
    std::uint64_t spine_len =
        std::max<std::uint64_t>(10000, std::uint64_t(spine_scale * spine_scale * double(x.norm2())));

    auto tree = tree_hit_prob_spine(field, x, spine_len, tree_replicas[i], seed.at(offset), workers);
    offset += tree_replicas[i];
    auto walk = hit_prob_sum_walks(d, 2, a, x, walk_replicas[i], seed.at(offset), 0, workers);
    offset += walk_replicas[i];

    EquivRow row;
    row.shell = x.norm();
    row.x = x;
    row.tree_prob = tree;
    row.walk_prob = walk.prob;
    row.tree_norm = law.degenerate() ? 0.0 : tree_hit_normalizer(d, law, x);
    row.censored = tree.mean <= 0.0 || walk.prob.mean <= 0.0;
    row.ratio = row.censored ? 0.0 : tree.mean / walk.prob.mean;
    if (!row.censored) {
      rmin = std::min(rmin, row.ratio);
      rmax = std::max(rmax, row.ratio);
    }
    out.rows.push_back(std::move(row));
  }
  out.band_max_over_min = (rmin > 0 && std::isfinite(rmin)) ? rmax / rmin
                                                            : std::numeric_limits<double>::quiet_NaN();
  return out;
}

MomentCheck local_time_moment_check(int d, int N, const LatticePoint& a, const LatticePoint& b,
                                    const LatticePoint& z, std::uint64_t replicas, SeedSpec seed,
                                    std::uint64_t horizon, int workers) {
  if (N != 1 && N != 2) throw std::invalid_argument("local_time_moment_check: N must be 1 or 2");
  if (d <= 2 * N) throw std::invalid_argument("local_time_moment_check: needs d > 2N");
  if (a.dim() != d || b.dim() != d || z.dim() != d)
    throw std::invalid_argument("local_time_moment_check: dimension mismatch");
  if (a == b) throw std::invalid_argument("local_time_moment_check: needs a != b");
  if (replicas < 2) throw std::invalid_argument("local_time_moment_check: needs >= 2 replicas");

  const std::uint64_t T =
      horizon ? horizon : std::max<std::uint64_t>(400, std::uint64_t(25.0 * double(z.norm2())));
  const KeyPacker pk(d);
  const Coord bound = pk.coord_bound();
  const LatticePoint ta = a - z, tb = b - z;
  const KeyPacker::Key ka = pk.pack(ta.data()), kb = pk.pack(tb.data());

  struct Mom {
    double la = 0, lb = 0, lab = 0;
  };
  auto one = [&](std::uint64_t, CounterRng& rng) -> Mom {
    double la = 0, lb = 0;
    if (N == 1) {
      WalkCursor w(LatticePoint::origin(d));
      auto probe = [&]() {
        la += w.key() == ka ? 1.0 : 0.0;
        lb += w.key() == kb ? 1.0 : 0.0;
      };
      probe();
      for (std::uint64_t t = 0; t < T; ++t) {
        w.step(rng);
        probe();
      }
    } else {
      // l(y) = sum_t occ_1(y - z - X^2_t): one occupation map, one stream
      PointCount occ(d, std::size_t(double(T) * 0.9) + 4);
      accumulate_walk_occupation(occ, T, rng, LatticePoint::origin(d), true);
      WalkCursor w(LatticePoint::origin(d));
      Coord diff[kMaxDim];
      auto look = [&](const LatticePoint& t) -> double {
        const Coord* c = w.coords();
        for (int j = 0; j < d; ++j) {
          diff[j] = t[j] - c[j];
          if (diff[j] > bound || diff[j] < -bound) return 0.0;
        }
        return double(occ.count(diff));
      };
      la += look(ta);
      lb += look(tb);
      for (std::uint64_t t = 0; t < T; ++t) {
        w.step(rng);
        la += look(ta);
        lb += look(tb);
      }
    }
    return Mom{la, lb, la * lb};
  };

  auto moms = replicate<Mom>(replicas, seed, one, workers);
  std::vector<double> va(replicas), vb(replicas), vab(replicas);
  for (std::uint64_t i = 0; i < replicas; ++i) {
    va[i] = moms[i].la;
    vb[i] = moms[i].lb;
    vab[i] = moms[i].lab;
  }

  // truncation undercounts local times, so the exact mean sits above
  double tail = tuple_tail_sup(d, N, double(T));
  MomentCheck out;
  out.ell_a = estimate_from(va, 0.0, tail);
  out.ell_b = estimate_from(vb, 0.0, tail);
  out.ell_ab = estimate_from(vab);
  const auto& G = green_table(d, N);
  out.pred_a = G.at(ta);
  out.pred_b = G.at(tb);
  out.frame = (out.pred_a + out.pred_b) * G.at(a - b);
  out.chat = out.ell_ab.mean / out.frame;
  out.chat_se = out.ell_ab.se / out.frame;
  out.horizon = T;
  return out;
}

namespace {

// lattice points per unit shell [rho, rho+1): their unit cubes sit inside
// the annulus padded by half a cube diagonal either side
double shell_count_bound(int d, double rho) {
  double h = 0.5 * std::sqrt(double(d));
  double vd = std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
  double outer = std::pow(rho + 1.0 + h, d);
  double inner = std::pow(std::max(rho - h, 0.0), d);
  return vd * (outer - inner);
}

// Recursive sweep of the lattice ball |w| <= radius accumulating
// G_k(zb+w) G_l(w) G_m(ab+w).
struct BallSum {
  int d = 0;
  double r2 = 0;
  const GreenTable* gk = nullptr;
  const GreenTable* gl = nullptr;
  const GreenTable* gm = nullptr;
  const Coord* zb = nullptr;
  const Coord* ab = nullptr;
  Coord w[kMaxDim] = {};
  Coord c1[kMaxDim] = {};
  Coord c2[kMaxDim] = {};
  double total = 0;

  void run(int j, double used) {
    if (j == d) {
      total += gk->at_coords(c1) * gl->at_coords(w) * gm->at_coords(c2);
      return;
    }
    int lim = int(std::sqrt(std::max(0.0, r2 - used)) + 1e-9);
    for (Coord v = Coord(-lim); v <= Coord(lim); ++v) {
      w[j] = v;
      c1[j] = zb[j] + v;
      c2[j] = ab[j] + v;
      run(j + 1, used + double(v) * double(v));
    }
  }
};

}  // namespace

TailedValue f_klm(int d, int k, int l, int m, const LatticePoint& z, const LatticePoint& a,
                  const LatticePoint& b, double radius) {
  if (k < 1 || l < 1 || m < 1) throw std::invalid_argument("f_klm: orders must be >= 1");
  if (d <= k + l + m) throw std::invalid_argument("f_klm: sum diverges unless d > k+l+m");
  int kmax = std::max(k, std::max(l, m));
  if (d <= 2 * kmax) throw std::invalid_argument("f_klm: needs d > 2 max(k,l,m)");
  if (z.dim() != d || a.dim() != d || b.dim() != d)
    throw std::invalid_argument("f_klm: dimension mismatch");

  const LatticePoint zb = z - b, ab = a - b;
  const double nzb = zb.norm(), nab = ab.norm();
  // the tail envelopes are applied at radii >= 6, where the asymptote with
  // its 1.5 pad is a verified upper bound; the ball must clear both shifted
  // poles by that margin
  if (radius < std::max(nzb, nab) + 6.0)
    throw std::invalid_argument("f_klm: radius must clear the shifted poles by >= 6");

  const auto& gk = green_table(d, k);
  const auto& gl = green_table(d, l);
  const auto& gm = green_table(d, m);
  gk.far_field();
  gl.far_field();
  gm.far_field();

  BallSum s;
  s.d = d;
  s.r2 = radius * radius;
  s.gk = &gk;
  s.gl = &gl;
  s.gm = &gm;
  s.zb = zb.data();
  s.ab = ab.data();
  s.run(0, 0.0);

  TailedValue out;
  out.value = s.total;
  for (double rho = std::floor(radius); rho < 1e6; rho += 1.0) {
    double term = shell_count_bound(d, rho) * gk.envelope(rho - nzb) * gl.envelope(rho) *
                  gm.envelope(rho - nab);
    out.tail += term;
    if (term < 1e-15 * out.value && rho > radius + 4) break;
  }
  return out;
}

double resolvent_probe_dev(int d, int N, double probe_radius) {
  if (d <= 2 * (N + 1))
    throw std::invalid_argument("resolvent_probe_dev: needs d > 2(N+1)");
  const auto& gn = green_table(d, N);
  const auto& gn1 = green_table(d, N + 1);

  double worst = 0.0;
  const double r2 = probe_radius * probe_radius;
  Coord v[kMaxDim] = {};
  Coord nb[kMaxDim] = {};
  // odometer over the box, filtered to the ball
  int lim = int(probe_radius);
  for (int j = 0; j < d; ++j) v[j] = Coord(-lim);
  while (true) {
    double n2 = 0;
    for (int j = 0; j < d; ++j) n2 += double(v[j]) * double(v[j]);
    if (n2 <= r2) {
      double lhs = gn1.at_coords(v);
      for (int j = 0; j < d; ++j) nb[j] = v[j];
      for (int j = 0; j < d; ++j) {
        nb[j] = Coord(v[j] + 1);
        lhs -= gn1.at_coords(nb) / (2.0 * d);
        nb[j] = Coord(v[j] - 1);
        lhs -= gn1.at_coords(nb) / (2.0 * d);
        nb[j] = v[j];
      }
      double rhs = gn.at_coords(v);
      worst = std::max(worst, std::abs(lhs - rhs) / rhs);
    }
    int j = 0;
    while (j < d && v[j] == Coord(lim)) {
      v[j] = Coord(-lim);
      ++j;
    }
    if (j == d) break;
    ++v[j];
  }
  return worst;
}

namespace {

// Dense kernel on an |v|_inf <= r box of Z^3, for the exact surrogate run
// of the small-terms rearrangement.
struct BoxKer {
  int r = 0;
  std::vector<double> v;

  double at(int x, int y, int z) const {
    if (std::abs(x) > r || std::abs(y) > r || std::abs(z) > r) return 0.0;
    int n = 2 * r + 1;
    return v[std::size_t(((x + r) * n + (y + r)) * n + (z + r))];
  }
  double& ref(int x, int y, int z) {
    int n = 2 * r + 1;
    return v[std::size_t(((x + r) * n + (y + r)) * n + (z + r))];
  }
  static BoxKer zero(int r) {
    BoxKer k;
    k.r = r;
    int n = 2 * r + 1;
    k.v.assign(std::size_t(n) * n * n, 0.0);
    return k;
  }
};

BoxKer conv3(const BoxKer& f, const BoxKer& g) {
  BoxKer out = BoxKer::zero(f.r + g.r);
  for (int x = -out.r; x <= out.r; ++x)
    for (int y = -out.r; y <= out.r; ++y)
      for (int z = -out.r; z <= out.r; ++z) {
        double s = 0;
        for (int u = -g.r; u <= g.r; ++u)
          for (int p = -g.r; p <= g.r; ++p)
            for (int q = -g.r; q <= g.r; ++q)
              s += g.at(u, p, q) * f.at(x - u, y - p, z - q);
        out.ref(x, y, z) = s;
      }
  return out;
}

using I3 = std::array<int, 3>;

double f_box(const BoxKer& P, const BoxKer& Q, const BoxKer& R, const I3& z, const I3& a,
             const I3& b) {
  double s = 0;
  for (int x = -Q.r; x <= Q.r; ++x)
    for (int y = -Q.r; y <= Q.r; ++y)
      for (int w = -Q.r; w <= Q.r; ++w) {
        double q = Q.at(x, y, w);
        if (q == 0.0) continue;
        s += P.at(z[0] - b[0] + x, z[1] - b[1] + y, z[2] - b[2] + w) * q *
             R.at(a[0] - b[0] + x, a[1] - b[1] + y, a[2] - b[2] + w);
      }
  return s;
}

BoxKer pseudo_kernel(int r, std::uint32_t salt) {
  BoxKer k = BoxKer::zero(r);
  std::uint32_t s = salt;
  for (auto& x : k.v) {
    s = s * 1664525u + 1013904223u;
    x = 0.25 + double(s >> 8) / double(1u << 25);
  }
  return k;
}

}  // namespace

double surrogate_identity_dev() {
  // h plays g and must be symmetric; P, Q, R are arbitrary positive box
  // kernels so index or orientation slips cannot cancel
  BoxKer h = BoxKer::zero(1);
  for (int x = -1; x <= 1; ++x)
    for (int y = -1; y <= 1; ++y)
      for (int z = -1; z <= 1; ++z)
        h.ref(x, y, z) = 1.0 / (1.0 + std::abs(x) + std::abs(y) + std::abs(z));
  BoxKer P = pseudo_kernel(1, 0xb5297a4du);
  BoxKer Q = pseudo_kernel(1, 0x68e31da4u);
  BoxKer R = pseudo_kernel(1, 0x1b56c4e9u);

  const I3 z{2, -1, 1}, a{1, 0, -1}, b{0, 1, 1};

  // left side: sum_{y,y'} [h(y)+h(y')] h(y-y') F(z, a+y, b+y').  The weight
  // h(y)h(y-y') is nonzero for y' in the doubled box even where h(y') = 0,
  // so both sums must run over radius 2 h.r.
  const int L = 2 * h.r;
  double lhs = 0;
  for (int y0 = -L; y0 <= L; ++y0)
    for (int y1 = -L; y1 <= L; ++y1)
      for (int y2 = -L; y2 <= L; ++y2)
        for (int p0 = -L; p0 <= L; ++p0)
          for (int p1 = -L; p1 <= L; ++p1)
            for (int p2 = -L; p2 <= L; ++p2) {
              double wgt = (h.at(y0, y1, y2) + h.at(p0, p1, p2)) *
                           h.at(y0 - p0, y1 - p1, y2 - p2);
              if (wgt == 0.0) continue;
              lhs += wgt * f_box(P, Q, R, z, I3{a[0] + y0, a[1] + y1, a[2] + y2},
                                 I3{b[0] + p0, b[1] + p1, b[2] + p2});
            }

  BoxKer hP = conv3(P, h), hQ = conv3(Q, h), hR = conv3(R, h);
  double rhs = f_box(hP, hQ, R, z, a, b) + f_box(hP, Q, hR, z, a, b);
  double dev = std::abs(lhs - rhs) / std::max(std::abs(lhs), std::abs(rhs));

  // the argument also leans on F^{P,Q,R}(z,a,b) = F^{P,R,Q}(z,b,a)
  double s1 = f_box(P, Q, R, z, a, b);
  double s2 = f_box(P, R, Q, z, b, a);
  double dev_sym = std::abs(s1 - s2) / std::max(std::abs(s1), std::abs(s2));
  return std::max(dev, dev_sym);
}

SmalltermsCheck smallterms_identity_check(int d, const LatticePoint& z, const LatticePoint& a,
                                          const LatticePoint& b) {
  SmalltermsCheck out;
  out.resolvent_dev_1 = resolvent_probe_dev(d, 1);
  out.resolvent_dev_2 = resolvent_probe_dev(d, 2);
  out.surrogate_dev = surrogate_identity_dev();

  double radius = std::ceil(std::max((z - b).norm(), (a - b).norm())) + 6.0;
  out.f_kp1_lp1_m = f_klm(d, 2, 2, 1, z, a, b, radius);
  out.f_kp1_l_mp1 = f_klm(d, 2, 1, 2, z, a, b, radius);
  out.max_rel_tail = std::max(out.f_kp1_lp1_m.tail / out.f_kp1_lp1_m.value,
                              out.f_kp1_l_mp1.tail / out.f_kp1_l_mp1.value);
  return out;
}

std::vector<RatePoint> charact_experiment(int d, int N, const PointSet& a,
                                          const std::vector<std::uint64_t>& ns,
                                          std::uint64_t replicas, SeedSpec seed, double qp_tol,
                                          int workers) {
  if (a.empty() || a.dim() != d) throw std::invalid_argument("charact_experiment: bad set");
  if (replicas < 2) throw std::invalid_argument("charact_experiment: needs >= 2 replicas");
  double gamma = double(d - 2 * (N - 1));
  if (gamma <= 0) throw std::invalid_argument("charact_experiment: needs d > 2(N-1)");

  std::vector<RatePoint> out;
  std::uint64_t offset = 0;
  for (auto n : ns) {
    if (n == 0) throw std::invalid_argument("charact_experiment: n must be >= 1");
    auto vals = replicate<double>(
        replicas, seed.at(offset),
        [&](std::uint64_t, CounterRng& rng) -> double {
          PointSet r = walk_range(d, n, rng);
          PointSet s = minkowski_sum(r, a);
          return cap_gamma(d, gamma, s, qp_tol).value / double(n);
        },
        workers);
    offset += replicas;
    out.push_back(RatePoint{n, estimate_from(vals)});
  }
  return out;
}

std::vector<RatePoint> d4_capacity_rate(const PointSet& a, const std::vector<std::uint64_t>& ns,
                                        std::uint64_t replicas, std::uint64_t horizon,
                                        double site_fraction, SeedSpec seed, int workers) {
  if (a.empty() || a.dim() != 4)
    throw std::invalid_argument("d4_capacity_rate: the log-corrected rate lives in d = 4");
  if (replicas < 2) throw std::invalid_argument("d4_capacity_rate: needs >= 2 replicas");
  if (!(site_fraction > 0.0) || site_fraction > 1.0)
    throw std::invalid_argument("d4_capacity_rate: site_fraction must be in (0,1]");
  if (horizon == 0) throw std::invalid_argument("d4_capacity_rate: horizon must be >= 1");

  std::vector<RatePoint> out;
  std::uint64_t offset = 0;
  for (auto n : ns) {
    if (n < 2) throw std::invalid_argument("d4_capacity_rate: n must be >= 2");
    double scale = std::log(double(n)) / double(n);
    auto pairs = replicate<std::array<double, 2>>(
        replicas, seed.at(offset),
        [&](std::uint64_t, CounterRng& rng) -> std::array<double, 2> {
          PointSet r = walk_range(4, n, rng);
          PointSet s = minkowski_sum(r, a);
          EscapeSum es = escape_sum_once(s, horizon, site_fraction, rng);
          return {scale * es.sum, scale * es.bias};
        },
        workers);
    offset += replicas;
    std::vector<double> vals(replicas);
    double mean_bias = 0;
    for (std::uint64_t i = 0; i < replicas; ++i) {
      vals[i] = pairs[i][0];
      mean_bias += pairs[i][1];
    }
    mean_bias /= double(replicas);
    // the horizon truncation only inflates escape counts
    out.push_back(RatePoint{n, estimate_from(vals, -mean_bias, 0.0)});
  }
  return out;
}

}  // namespace rwcap
