#include <doctest.h>

#include <Eigen/Dense>
#include <random>

#include "olsaudit/msn_bounds.hpp"
#include "oracles.hpp"

using namespace olsaudit;

namespace {

// Gram matrix of n random vectors in dimension dim.
Eigen::MatrixXd random_gram(int n, int dim, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  auto unif = [&] { return 2.0 * (double(gen() >> 11) * 0x1.0p-53) - 1.0; };
  Eigen::MatrixXd V(n, dim);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < dim; ++j) V(i, j) = unif();
  }
  return V * V.transpose();
}

std::vector<int> random_buckets(int n, int m, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::vector<int> b(static_cast<size_t>(n));
  // Every bucket gets at least one member; the rest land uniformly.
  for (int j = 0; j < m; ++j) b[size_t(j)] = j;
  for (int i = m; i < n; ++i) b[size_t(i)] = int(gen() % std::uint64_t(m));
  return b;
}

}  // namespace

TEST_CASE("rti_bound tiny cases") {
  Eigen::MatrixXd g1(1, 1);
  g1 << 1;
  CHECK(rti_bound(g1)[1] == doctest::Approx(1.0));

  Eigen::MatrixXd g2 = Eigen::MatrixXd::Identity(2, 2);
  MsnBoundVector v = rti_bound(g2);
  CHECK(v[1] == doctest::Approx(1.0));
  CHECK(v[2] == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("rti_bound dominates the exhaustive MSN") {
  Eigen::MatrixXd G = random_gram(8, 3, 11);
  MsnBoundVector v = rti_bound(G);
  for (int k = 1; k <= 8; ++k) {
    CHECK(v[k] >= oracles::exact_msn(G, k) - 1e-10);
  }
}

TEST_CASE("rti_bound k_max truncation matches the full run") {
  Eigen::MatrixXd G = random_gram(10, 4, 12);
  MsnBoundVector full = rti_bound(G);
  MsnBoundVector part = rti_bound(G, 4);
  REQUIRE(part.k_max() == 4);
  for (int k = 1; k <= 4; ++k) CHECK(part[k] == doctest::Approx(full[k]));
}

TEST_CASE("rti_bound_rows equals the materialized path") {
  Eigen::MatrixXd G = random_gram(9, 3, 13);
  MsnBoundVector direct = rti_bound(G);
  MsnBoundVector rows = rti_bound_rows(
      9, [&](Eigen::Index i, Eigen::VectorXd& row) { row = G.row(i); });
  for (int k = 1; k <= 9; ++k) CHECK(rows[k] == doctest::Approx(direct[k]));
}

TEST_CASE("spectral_bound sandwich on identity") {
  Eigen::MatrixXd g2 = Eigen::MatrixXd::Identity(2, 2);
  MsnBoundVector v = spectral_bound(g2);
  CHECK(v[1] >= 1.0 - 1e-12);
  CHECK(v[2] >= std::sqrt(2.0) - 1e-12);
}

TEST_CASE("spectral_bound is exact on the uniform rank-1 Gram") {
  const int n = 6;
  Eigen::VectorXd q = Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(double(n)));
  Eigen::MatrixXd G = q * q.transpose();
  MsnBoundVector v = spectral_bound(G);
  for (int k = 1; k <= n; ++k) {
    CHECK(v[k] == doctest::Approx(double(k) / std::sqrt(double(n))).epsilon(1e-9));
  }
}

TEST_CASE("spectral_bound dominates the exhaustive MSN") {
  Eigen::MatrixXd G = random_gram(10, 10, 14);
  MsnBoundVector v = spectral_bound(G);
  for (int k = 1; k <= 10; ++k) {
    CHECK(v[k] >= oracles::exact_msn(G, k) - 1e-8);
  }
}

TEST_CASE("greedy_lower_bound basics") {
  Eigen::MatrixXd g2 = Eigen::MatrixXd::Identity(2, 2);
  GreedyMsnResult r = greedy_lower_bound(g2);
  CHECK(r.L[1] == doctest::Approx(1.0));
  CHECK(r.L[2] == doctest::Approx(2.0));

  Eigen::MatrixXd ones(2, 2);
  ones << 1, 1, 1, 1;
  CHECK(greedy_lower_bound(ones).L[2] == doctest::Approx(4.0));
}

TEST_CASE("greedy_lower_bound is recomputable and below the max") {
  Eigen::MatrixXd G = random_gram(8, 3, 15);
  GreedyMsnResult r = greedy_lower_bound(G);
  for (int k = 1; k <= 8; ++k) {
    std::vector<int> prefix(r.ordering.begin(), r.ordering.begin() + k);
    const double direct = oracles::quad_form(G, prefix);
    CHECK(r.L[size_t(k)] == doctest::Approx(direct).epsilon(1e-10));
    const double best = oracles::exact_msn(G, k);
    CHECK(std::sqrt(std::max(0.0, r.L[size_t(k)])) <= best + 1e-10);
  }
}

TEST_CASE("msn sandwich: greedy <= exact <= min(rti, spectral)") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const int n = 6 + int(seed % 4);
    Eigen::MatrixXd G = random_gram(n, 3, 100 + seed);
    MsnBoundVector rti = rti_bound(G);
    MsnBoundVector spec = spectral_bound(G);
    GreedyMsnResult greedy = greedy_lower_bound(G);
    for (int k = 1; k <= n; ++k) {
      const double exact = oracles::exact_msn(G, k);
      CHECK(std::sqrt(std::max(0.0, greedy.L[size_t(k)])) <= exact + 1e-8);
      CHECK(exact <= std::min(rti[k], spec[k]) + 1e-8);
    }
  }
}

TEST_CASE("bounds are permutation equivariant") {
  Eigen::MatrixXd G = random_gram(7, 3, 16);
  std::vector<int> perm{3, 1, 6, 0, 5, 2, 4};
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(7, 7);
  for (int i = 0; i < 7; ++i) P(i, perm[size_t(i)]) = 1.0;
  Eigen::MatrixXd Gp = P * G * P.transpose();

  MsnBoundVector a = rti_bound(G), b = rti_bound(Gp);
  MsnBoundVector c = spectral_bound(G), d = spectral_bound(Gp);
  GreedyMsnResult e = greedy_lower_bound(G), f = greedy_lower_bound(Gp);
  for (int k = 1; k <= 7; ++k) {
    CHECK(a[k] == doctest::Approx(b[k]).epsilon(1e-9));
    CHECK(c[k] == doctest::Approx(d[k]).epsilon(1e-7));
    CHECK(e.L[size_t(k)] == doctest::Approx(f.L[size_t(k)]).epsilon(1e-9));
  }
}

TEST_CASE("ku_triangle_bound: single bucket reduces to rti") {
  Eigen::MatrixXd G = random_gram(8, 3, 17);
  std::vector<int> one(8, 0);
  MsnBoundMatrix ku = ku_triangle_bound(G, one, 1, 8);
  MsnBoundVector rti = rti_bound(G);
  for (int k = 1; k <= 8; ++k) {
    REQUIRE(ku.feasible(1, k));
    CHECK(ku.at(1, k) <= rti[k] + 1e-10);
    CHECK(ku.at(1, k) >= oracles::exact_msn(G, k) - 1e-10);
  }
}

TEST_CASE("ku_triangle_bound: singleton buckets at u = k match rti") {
  Eigen::MatrixXd G = random_gram(6, 3, 18);
  std::vector<int> singletons{0, 1, 2, 3, 4, 5};
  MsnBoundMatrix ku = ku_triangle_bound(G, singletons, 6, 6);
  MsnBoundVector rti = rti_bound(G);
  for (int k = 1; k <= 6; ++k) {
    REQUIRE(ku.feasible(k, k));
    CHECK(ku.at(k, k) == doctest::Approx(rti[k]).epsilon(1e-10));
  }
}

TEST_CASE("ku_triangle_bound dominates the constrained exhaustive maxima") {
  // Two buckets of three vectors each, then a random 3-bucket split.
  struct Case {
    int n, m;
    std::uint64_t seed;
  };
  for (Case c : {Case{6, 2, 19}, Case{8, 3, 20}}) {
    Eigen::MatrixXd G = random_gram(c.n, 3, c.seed);
    std::vector<int> bucket_of = c.m == 2 ? std::vector<int>{0, 0, 0, 1, 1, 1}
                                          : random_buckets(c.n, c.m, c.seed + 1);
    MsnBoundMatrix ku = ku_triangle_bound(G, bucket_of, c.m, c.n);
    for (int u = 1; u <= c.m; ++u) {
      for (int k = u; k <= c.n; ++k) {
        const double exact = oracles::exact_msn_exact_u(G, bucket_of, u, k);
        if (std::isinf(exact)) continue;  // no subset with exactly u buckets
        REQUIRE(ku.feasible(u, k));
        CHECK(ku.at(u, k) >= exact - 1e-10);
      }
    }
  }
}

TEST_CASE("ku_triangle_bound feasibility marking") {
  Eigen::MatrixXd G = random_gram(4, 2, 21);
  std::vector<int> bucket_of{0, 0, 1, 1};
  MsnBoundMatrix ku = ku_triangle_bound(G, bucket_of, 2, 4);
  CHECK(ku.feasible(0, 0));
  CHECK_FALSE(ku.feasible(0, 1));  // removals need at least one bucket
  CHECK_FALSE(ku.feasible(2, 1));  // u > k
  CHECK_FALSE(ku.feasible(1, 4));  // only 2 non-extremal picks exist outside the maxima
  CHECK(ku.feasible(1, 2));
  CHECK(ku.feasible(2, 4));
}

TEST_CASE("ku_triangle_bound rejects bad partitions") {
  Eigen::MatrixXd G = random_gram(4, 2, 22);
  std::vector<int> short_assignment{0, 0, 1};
  CHECK_THROWS_AS(ku_triangle_bound(G, short_assignment, 2, 4), InvalidPartitionError);
  std::vector<int> gap{0, 0, 2, 2};  // bucket 1 missing
  CHECK_THROWS_AS(ku_triangle_bound(G, gap, 2, 4), InvalidPartitionError);
}

TEST_CASE("non-square input is rejected") {
  Eigen::MatrixXd G(2, 3);
  G.setZero();
  CHECK_THROWS_AS(rti_bound(G), NonSquareInputError);
  CHECK_THROWS_AS(spectral_bound(G), NonSquareInputError);
  CHECK_THROWS_AS(greedy_lower_bound(G), NonSquareInputError);
}
