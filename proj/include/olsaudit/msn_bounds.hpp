#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <vector>

#include "olsaudit/errors.hpp"

namespace olsaudit {

/// Per-k upper bounds on the maximal subset-sum norm of the vectors behind a
/// Gram matrix. V[k] bounds MSN_k; V[0] = 0.
struct MsnBoundVector {
  std::vector<double> V;

  int k_max() const { return int(V.size()) - 1; }
  double operator[](int k) const { return V[size_t(k)]; }
};

/// (u, k)-indexed upper bounds: V(u, k) bounds the norm of any sum of k
/// vectors drawn from exactly u distinct buckets. NaN marks infeasible
/// combinations (u > k, u beyond the bucket count, or more non-extremal
/// picks than exist outside the per-bucket maxima).
struct MsnBoundMatrix {
  Eigen::MatrixXd V;  // (u_max + 1) x (k_max + 1)

  int u_max() const { return int(V.rows()) - 1; }
  int k_max() const { return int(V.cols()) - 1; }
  bool feasible(int u, int k) const { return !std::isnan(V(u, k)); }
  double at(int u, int k) const { return V(u, k); }
};

/// Greedy MSN lower bound: the chosen prefix ordering and the exact
/// quadratic forms L[k] = 1_{T_{:k}}^T G 1_{T_{:k}} it achieves (L[0] = 0).
struct GreedyMsnResult {
  std::vector<int> ordering;
  std::vector<double> L;
};

/// Refined triangle inequality (sort + cumulative-sum) upper bound.
/// k_max < 0 means bound every k up to n.
MsnBoundVector rti_bound(const Eigen::MatrixXd& G, int k_max = -1);

/// RTI on a Gram matrix produced one row at a time; avoids materializing G.
/// fill_row(i, row) must write the n entries of row i.
MsnBoundVector rti_bound_rows(Eigen::Index n,
                              const std::function<void(Eigen::Index, Eigen::VectorXd&)>& fill_row,
                              int k_max = -1);

/// Eigendecomposition-based upper bound; negative eigenvalues (numerical PSD
/// violations) are clamped to zero.
MsnBoundVector spectral_bound(const Eigen::MatrixXd& G, int k_max = -1);

GreedyMsnResult greedy_lower_bound(const Eigen::MatrixXd& G);

/// KU refinement of RTI: bounds sums of k vectors touching exactly u buckets.
/// bucket_of[i] gives the bucket id of vector i; ids must cover [0, m).
MsnBoundMatrix ku_triangle_bound(const Eigen::MatrixXd& G, const std::vector<int>& bucket_of,
                                 int u_max, int k_max);

}  // namespace olsaudit
