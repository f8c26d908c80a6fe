// SPDX-License-Identifier: Apache-2.0
#include "rwcap/kernel.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "rwcap/green.hpp"

namespace rwcap {

KernelSpec KernelSpec::green(int d, int N) {
  KernelSpec s;
  s.kind = KernelKind::green;
  s.d = d;
  s.N = N;
  green_table(d, N);  // validates d > 2N early
  return s;
}

KernelSpec KernelSpec::radial(int d, double gamma) {
  check_dim(d);
  if (!(gamma > 0)) throw std::invalid_argument("radial kernel needs gamma > 0");
  KernelSpec s;
  s.kind = KernelKind::radial;
  s.d = d;
  s.gamma = gamma;
  return s;
}

double KernelSpec::value(const LatticePoint& diff) const {
  if (diff.dim() != d) throw std::invalid_argument("kernel: dimension mismatch");
  switch (kind) {
    case KernelKind::green:
      return green_table(d, N).at(diff);
    case KernelKind::radial:
      return std::pow(1.0 + diff.norm(), -gamma);
  }
  throw std::logic_error("unreachable");
}

std::string KernelSpec::name() const {
  switch (kind) {
    case KernelKind::green:
      return N == 1 ? "green(d=" + std::to_string(d) + ")"
                    : "green^" + std::to_string(N) + "(d=" + std::to_string(d) + ")";
    case KernelKind::radial: {
      std::string g = std::to_string(gamma);
      g.erase(g.find_last_not_of('0') + 1);
      if (!g.empty() && g.back() == '.') g.pop_back();
      return "radial(d=" + std::to_string(d) + ",gamma=" + g + ")";
    }
  }
  throw std::logic_error("unreachable");
}

KernelMatrix kernel_matrix(const KernelSpec& spec, const PointSet& a) {
  if (a.dim() != spec.d) throw std::invalid_argument("kernel_matrix: dimension mismatch");
  if (a.empty()) throw std::invalid_argument("kernel_matrix: empty set");
  KernelMatrix m;
  m.spec = spec;
  m.sites = a.sorted_points();
  auto n = Eigen::Index(m.sites.size());
  m.K.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      double v = spec.value(m.sites[std::size_t(i)] - m.sites[std::size_t(j)]);
      m.K(i, j) = v;
      m.K(j, i) = v;
    }
  }
  return m;
}

void write_kernel_csv(std::ostream& os, const KernelMatrix& m) {
  os << "i,j,site_i,site_j,value\n";
  os.precision(17);
  auto n = Eigen::Index(m.sites.size());
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      os << i << ',' << j << ',' << '"' << m.sites[std::size_t(i)].to_string() << '"' << ','
         << '"' << m.sites[std::size_t(j)].to_string() << '"' << ',' << m.K(i, j) << "\n";
}

}  // namespace rwcap
