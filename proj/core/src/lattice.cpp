// SPDX-License-Identifier: Apache-2.0
#include "rwcap/lattice.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace rwcap {

std::string LatticePoint::to_string() const {
  std::string s = "(";
  for (int j = 0; j < dim_; ++j) {
    if (j) s += ",";
    s += std::to_string(c_[j]);
  }
  s += ")";
  return s;
}

std::vector<LatticePoint> PointSet::points() const {
  std::vector<LatticePoint> out;
  out.reserve(size_);
  Coord buf[kMaxDim];
  for (Key s : slots_) {
    if (s != kEmpty) {
      packer_.unpack(s, buf);
      out.emplace_back(dim(), buf);
    }
  }
  return out;
}

std::vector<LatticePoint> PointSet::sorted_points() const {
  auto out = points();
  std::sort(out.begin(), out.end());
  return out;
}

LatticePoint PointSet::centroid_rounded() const {
  LatticePoint c(dim());
  if (size_ == 0) return c;
  double acc[kMaxDim] = {};
  for_each([&](const Coord* p) {
    for (int j = 0; j < dim(); ++j) acc[j] += p[j];
  });
  for (int j = 0; j < dim(); ++j) c[j] = Coord(std::lround(acc[j] / double(size_)));
  return c;
}

double PointSet::radius_about(const LatticePoint& center) const {
  double r2max = 0;
  for_each([&](const Coord* p) {
    double r2 = 0;
    for (int j = 0; j < dim(); ++j) {
      double dj = double(p[j]) - double(center[j]);
      r2 += dj * dj;
    }
    if (r2 > r2max) r2max = r2;
  });
  return std::sqrt(r2max);
}

double PointSet::diameter() const {
  auto pts = points();
  double m2 = 0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t k = i + 1; k < pts.size(); ++k) {
      double r2 = double((pts[i] - pts[k]).norm2());
      if (r2 > m2) m2 = r2;
    }
  return std::sqrt(m2);
}

PointSet make_point_set(int dim, std::initializer_list<LatticePoint> pts) {
  PointSet s(dim, pts.size());
  for (const auto& p : pts) {
    if (p.dim() != dim) throw std::invalid_argument("point dimension mismatch");
    s.insert(p);
  }
  return s;
}

PointSet make_point_set(const std::vector<LatticePoint>& pts) {
  if (pts.empty()) throw std::invalid_argument("cannot infer dimension of empty set");
  PointSet s(pts[0].dim(), pts.size());
  for (const auto& p : pts) {
    if (p.dim() != s.dim()) throw std::invalid_argument("point dimension mismatch");
    s.insert(p);
  }
  return s;
}

void write_point_set(std::ostream& os, const PointSet& s) {
  os << "d=" << s.dim() << "\n";
  for (const auto& p : s.sorted_points()) {
    for (int j = 0; j < s.dim(); ++j) {
      if (j) os << ' ';
      os << p[j];
    }
    os << "\n";
  }
}

PointSet read_point_set(std::istream& is) {
  std::string line;
  int dim = 0;
  while (std::getline(is, line)) {
    auto h = line.find('#');
    if (h != std::string::npos) line.erase(h);
    auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    if (line.compare(b, 2, "d=") != 0)
      throw std::runtime_error("point set file must start with a d=<dim> line");
    dim = std::stoi(line.substr(b + 2));
    break;
  }
  if (dim == 0) throw std::runtime_error("point set file has no d=<dim> line");
  check_dim(dim);
  PointSet s(dim);
  while (std::getline(is, line)) {
    auto h = line.find('#');
    if (h != std::string::npos) line.erase(h);
    std::istringstream ls(line);
    LatticePoint p(dim);
    long v = 0;
    int j = 0;
    while (ls >> v) {
      if (j >= dim) throw std::runtime_error("too many coordinates on line: " + line);
      p[j++] = Coord(v);
    }
    if (j == 0) continue;
    if (j != dim) throw std::runtime_error("expected " + std::to_string(dim) +
                                           " coordinates on line: " + line);
    s.insert(p);
  }
  return s;
}

void save_point_set(const std::string& path, const PointSet& s) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  write_point_set(f, s);
}

PointSet load_point_set(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open: " + path);
  return read_point_set(f);
}

}  // namespace rwcap
