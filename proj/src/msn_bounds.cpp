#include "olsaudit/msn_bounds.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <limits>
#include <numeric>

namespace olsaudit {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_square(const Eigen::MatrixXd& G) {
  if (G.rows() != G.cols()) throw NonSquareInputError();
}

int clamp_k_max(Eigen::Index n, int k_max) {
  if (k_max < 0 || k_max > n) return int(n);
  return k_max;
}

// Sum of the `count` largest entries of buf (buf is clobbered).
double top_sum(std::vector<double>& buf, int count) {
  if (count <= 0) return 0.0;
  const int n = int(buf.size());
  if (count >= n) return std::accumulate(buf.begin(), buf.end(), 0.0);
  std::nth_element(buf.begin(), buf.begin() + (count - 1), buf.end(), std::greater<double>());
  return std::accumulate(buf.begin(), buf.begin() + count, 0.0);
}

}  // namespace

MsnBoundVector rti_bound_rows(Eigen::Index n,
                              const std::function<void(Eigen::Index, Eigen::VectorXd&)>& fill_row,
                              int k_max) {
  const int km = clamp_k_max(n, k_max);
  // C(i, k-1) = sum of the k largest entries of row i.
  Eigen::MatrixXd C(n, km);
  Eigen::VectorXd row(n);
  std::vector<double> buf(static_cast<size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    fill_row(i, row);
    std::copy(row.data(), row.data() + n, buf.begin());
    std::partial_sort(buf.begin(), buf.begin() + km, buf.end(), std::greater<double>());
    double acc = 0.0;
    for (int k = 0; k < km; ++k) {
      acc += buf[size_t(k)];
      C(i, k) = acc;
    }
  }

  MsnBoundVector out;
  out.V.assign(size_t(km) + 1, 0.0);
  std::vector<double> col(static_cast<size_t>(n));
  for (int k = 1; k <= km; ++k) {
    for (Eigen::Index i = 0; i < n; ++i) col[size_t(i)] = C(i, k - 1);
    double skk = top_sum(col, k);
    out.V[size_t(k)] = std::sqrt(std::max(0.0, skk));
  }
  return out;
}

MsnBoundVector rti_bound(const Eigen::MatrixXd& G, int k_max) {
  check_square(G);
  return rti_bound_rows(
      G.rows(), [&G](Eigen::Index i, Eigen::VectorXd& row) { row = G.row(i); }, k_max);
}

MsnBoundVector spectral_bound(const Eigen::MatrixXd& G, int k_max) {
  check_square(G);
  const Eigen::Index n = G.rows();
  const int km = clamp_k_max(n, k_max);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
  if (es.info() != Eigen::Success) throw EigenFailureError("spectral MSN backend");
  // Eigen returns ascending eigenvalues; we consume them in descending order.
  Eigen::VectorXd lambda = es.eigenvalues().cwiseMax(0.0);

  // For eigenvector v and subset size k, <1_T, v> lies between the sum of the
  // k smallest and the k largest entries of v. Keep both prefix tables.
  Eigen::MatrixXd low(n, km + 1), high(n, km + 1);
  std::vector<double> ent(static_cast<size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto v = es.eigenvectors().col(i);
    std::copy(v.data(), v.data() + n, ent.begin());
    std::sort(ent.begin(), ent.end());
    double acc = 0.0;
    low(i, 0) = 0.0;
    for (int k = 1; k <= km; ++k) {
      acc += ent[size_t(k - 1)];
      low(i, k) = acc;
    }
    double tail = 0.0;
    high(i, 0) = 0.0;
    for (int k = 1; k <= km; ++k) {
      tail += ent[size_t(n - k)];
      high(i, k) = tail;
    }
  }

  MsnBoundVector out;
  out.V.assign(size_t(km) + 1, 0.0);
  for (int k = 1; k <= km; ++k) {
    double remaining = double(k);  // sum_i <1_T, v_i>^2 = k
    double total = 0.0;
    for (Eigen::Index i = n - 1; i >= 0 && remaining > 0.0; --i) {
      if (lambda[i] <= 0.0) break;
      double l = low(i, k), h = high(i, k);
      double b = std::max(l * l, h * h);
      double take = std::min(b, remaining);
      total += lambda[i] * take;
      remaining -= take;
    }
    out.V[size_t(k)] = std::sqrt(std::max(0.0, total));
  }
  return out;
}

GreedyMsnResult greedy_lower_bound(const Eigen::MatrixXd& G) {
  check_square(G);
  const Eigen::Index n = G.rows();
  GreedyMsnResult res;
  res.ordering.reserve(size_t(n));
  res.L.assign(size_t(n) + 1, 0.0);

  Eigen::VectorXd delta = G.diagonal();  // score change from adding index i
  std::vector<char> used(size_t(n), 0);
  for (Eigen::Index step = 1; step <= n; ++step) {
    Eigen::Index best = -1;
    double best_val = -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!used[size_t(i)] && delta[i] > best_val) {
        best_val = delta[i];
        best = i;
      }
    }
    used[size_t(best)] = 1;
    res.ordering.push_back(int(best));
    res.L[size_t(step)] = res.L[size_t(step - 1)] + delta[best];
    delta += 2.0 * G.col(best);
  }
  return res;
}

MsnBoundMatrix ku_triangle_bound(const Eigen::MatrixXd& G, const std::vector<int>& bucket_of,
                                 int u_max, int k_max) {
  check_square(G);
  const Eigen::Index n = G.rows();
  if (Eigen::Index(bucket_of.size()) != n) {
    throw InvalidPartitionError("assignment length != matrix size");
  }
  int m = 0;
  for (int b : bucket_of) {
    if (b < 0) throw InvalidPartitionError("negative bucket id");
    m = std::max(m, b + 1);
  }
  std::vector<std::vector<int>> members(static_cast<size_t>(m));
  for (Eigen::Index i = 0; i < n; ++i) members[size_t(bucket_of[size_t(i)])].push_back(int(i));
  for (int b = 0; b < m; ++b) {
    if (members[size_t(b)].empty()) {
      throw InvalidPartitionError("bucket " + std::to_string(b) + " is empty");
    }
  }

  const int km = std::min(clamp_k_max(n, k_max), int(n));
  const int um = std::min(u_max < 0 ? m : u_max, std::min(m, km));
  const int n_rest = int(n) - m;

  // Per row: prefix sums over the sorted per-bucket maxima (CB) and over the
  // remaining entries (CR). Row contribution for (u, k) is CB[u] + CR[k-u]:
  // a set touching exactly u buckets can use at most one per-bucket argmax
  // per touched bucket; every other element falls in the non-max pool.
  Eigen::MatrixXd CB(n, m + 1);
  const int cr_len = std::min(n_rest, km) + 1;
  Eigen::MatrixXd CR(n, cr_len);
  {
    std::vector<double> best(static_cast<size_t>(m));
    std::vector<double> rest;
    rest.reserve(size_t(n));
    for (Eigen::Index r = 0; r < n; ++r) {
      rest.clear();
      for (int b = 0; b < m; ++b) {
        double mx = -std::numeric_limits<double>::infinity();
        int arg = -1;
        for (int i : members[size_t(b)]) {
          if (G(r, i) > mx) {
            mx = G(r, i);
            arg = i;
          }
        }
        best[size_t(b)] = mx;
        for (int i : members[size_t(b)]) {
          if (i != arg) rest.push_back(G(r, i));
        }
      }
      std::sort(best.begin(), best.end(), std::greater<double>());
      CB(r, 0) = 0.0;
      for (int u = 1; u <= m; ++u) CB(r, u) = CB(r, u - 1) + best[size_t(u - 1)];
      std::partial_sort(rest.begin(), rest.begin() + (cr_len - 1), rest.end(),
                        std::greater<double>());
      CR(r, 0) = 0.0;
      for (int t = 1; t < cr_len; ++t) CR(r, t) = CR(r, t - 1) + rest[size_t(t - 1)];
    }
  }

  MsnBoundMatrix out;
  out.V = Eigen::MatrixXd::Constant(um + 1, km + 1, kNaN);
  out.V(0, 0) = 0.0;

  std::vector<double> w(static_cast<size_t>(n));
  std::vector<double> wbest(static_cast<size_t>(m));
  std::vector<double> wrest;
  wrest.reserve(size_t(n));
  for (int u = 1; u <= um; ++u) {
    for (int k = u; k <= km; ++k) {
      const int t = k - u;
      if (t > n_rest) continue;  // not enough non-extremal picks: infeasible
      for (Eigen::Index i = 0; i < n; ++i) w[size_t(i)] = CB(i, u) + CR(i, t);

      // Same exactly-u selection on the outer sum over rows of T.
      wrest.clear();
      for (int b = 0; b < m; ++b) {
        double mx = -std::numeric_limits<double>::infinity();
        int arg = -1;
        for (int i : members[size_t(b)]) {
          if (w[size_t(i)] > mx) {
            mx = w[size_t(i)];
            arg = i;
          }
        }
        wbest[size_t(b)] = mx;
        for (int i : members[size_t(b)]) {
          if (i != arg) wrest.push_back(w[size_t(i)]);
        }
      }
      std::sort(wbest.begin(), wbest.end(), std::greater<double>());
      double total = std::accumulate(wbest.begin(), wbest.begin() + u, 0.0);
      total += top_sum(wrest, t);
      out.V(u, k) = std::sqrt(std::max(0.0, total));
    }
  }
  return out;
}

}  // namespace olsaudit
