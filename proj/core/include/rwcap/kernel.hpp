// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string>
#include <vector>

#include "rwcap/lattice.hpp"

namespace rwcap {

enum class KernelKind {
  green,   // G_N(x - y), the walk Green's function or a convolution power
  radial,  // (1 + |x - y|)^(-gamma), Euclidean distance
};

// A positive definite translation-invariant kernel on Z^d.
struct KernelSpec {
  KernelKind kind = KernelKind::green;
  int d = 0;
  int N = 1;            // green only
  double gamma = 0.0;   // radial only

  static KernelSpec green(int d, int N = 1);
  static KernelSpec radial(int d, double gamma);

  double value(const LatticePoint& diff) const;
  std::string name() const;
};

// Dense kernel matrix over the sites of A in lexicographic order, so equal
// sets produce byte-identical matrices however they were built.
struct KernelMatrix {
  KernelSpec spec;
  std::vector<LatticePoint> sites;
  Eigen::MatrixXd K;
};

KernelMatrix kernel_matrix(const KernelSpec& spec, const PointSet& a);

// CSV rows: i, j, site_i, site_j, value. Deterministic order.
void write_kernel_csv(std::ostream& os, const KernelMatrix& m);

}  // namespace rwcap
