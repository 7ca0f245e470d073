#include <algorithm>
#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "coldgas/lll.hpp"
#include "oracles.hpp"

using namespace coldgas::lll;

namespace {

const double kUnit = std::pow(2.0 * std::numbers::pi, -1.5);

Eigen::MatrixXd dense(const DeltaBlock& b) { return Eigen::MatrixXd(b.matrix); }

std::vector<std::vector<int>> occupations(const Basis& basis) {
  std::vector<std::vector<int>> out;
  for (const auto& s : basis.states) out.push_back(s.occupations());
  return out;
}

}  // namespace

TEST(LLLBasis, SmallBlocks) {
  const auto b22 = enumerate_basis(2, 2);
  ASSERT_EQ(b22.size(), 2u);
  EXPECT_EQ(b22.states[0].parts, (std::vector<int>{2, 0}));
  EXPECT_EQ(b22.states[1].parts, (std::vector<int>{1, 1}));
  const auto b33 = enumerate_basis(3, 3);
  ASSERT_EQ(b33.size(), 3u);
  EXPECT_EQ(b33.states[2].parts, (std::vector<int>{1, 1, 1}));
  for (const auto& s : b33.states) {
    EXPECT_EQ(s.angular_momentum(), 3);
    EXPECT_EQ(s.particles(), 3);
  }
  EXPECT_EQ(b33.index_of({2, 1, 0}), 1u);
  EXPECT_EQ(b33.index_of({3, 1, 0}), Basis::npos);
}

TEST(LLLBasis, CountsMatchIndependentWalk) {
  for (int N = 1; N <= 8; ++N) {
    for (int L = 0; L <= 40; ++L) {
      const auto expected = coldgas::oracle::partition_count_walk(N, L);
      EXPECT_EQ(partition_count(N, L), expected) << N << " " << L;
      if (expected < 20000) EXPECT_EQ(enumerate_basis(N, L).size(), expected) << N << " " << L;
    }
  }
  EXPECT_EQ(enumerate_basis(6, 30).size(), coldgas::oracle::partition_count_walk(6, 30));
  // with N >= L the restriction is void
  EXPECT_EQ(partition_count(40, 40), coldgas::oracle::partition_number(40));
}

TEST(LLLBasis, SizeCap) {
  EXPECT_THROW(enumerate_basis(8, 40, 100), SizeLimit);
  EXPECT_NO_THROW(enumerate_basis(8, 40, 100000));
}

TEST(LLLNorms, SingleModeAgainstQuadrature) {
  for (double beta : {0.25, 0.5, 1.0}) {
    for (int m : {0, 1, 3, 7}) {
      const double q = coldgas::oracle::mode_norm_sq_quadrature(m, beta);
      EXPECT_NEAR(single_mode_norm_sq(m, beta) / q, 1.0, 1e-10) << m << " " << beta;
    }
    EXPECT_NEAR(single_mode_norm_sq(0, beta) / single_mode_norm_sq(1, beta), beta, 1e-14);
  }
}

TEST(LLLNorms, SymmetrisationFactors) {
  const double beta = 0.5;
  const auto basis = enumerate_basis(2, 2);
  const auto norms = bargmann_norms(basis, beta);
  // m_(2,0) = z1^2 + z2^2 and m_(1,1) = z1 z2
  EXPECT_EQ(norms[0].multiplicity, 2.0);
  EXPECT_EQ(norms[1].multiplicity, 1.0);
  EXPECT_NEAR(norms[0].multiplicity / norms[1].multiplicity, 2.0, 0.0);
  const double q0 = coldgas::oracle::mode_norm_sq_quadrature(0, beta);
  const double q1 = coldgas::oracle::mode_norm_sq_quadrature(1, beta);
  const double q2 = coldgas::oracle::mode_norm_sq_quadrature(2, beta);
  EXPECT_NEAR(norms[0].norm() * norms[0].norm() / (2.0 * q2 * q0), 1.0, 1e-10);
  EXPECT_NEAR(norms[1].norm() * norms[1].norm() / (q1 * q1), 1.0, 1e-10);
  // one particle: m_(m) = z^m
  const auto one = bargmann_norms(enumerate_basis(1, 5), beta);
  EXPECT_NEAR(one[0].norm() * one[0].norm() / coldgas::oracle::mode_norm_sq_quadrature(5, beta), 1.0, 1e-10);
}

TEST(LLLDelta, TwoParticleBlocks) {
  const auto b0 = delta_matrix(2, 0);
  ASSERT_EQ(b0.matrix.rows(), 1);
  EXPECT_NEAR(dense(b0)(0, 0), kUnit, 1e-15);

  const auto b2 = delta_matrix(2, 2);
  const Eigen::MatrixXd d = dense(b2);
  // (z1 - z2)^2 = m_(2,0) - 2 m_(1,1) in the orthonormal basis
  const auto norms = bargmann_norms(b2.basis);
  Eigen::Vector2d v(norms[0].norm(), -2.0 * norms[1].norm());
  EXPECT_LT((d * v).norm(), 1e-14 * v.norm());
}

TEST(LLLDelta, SymmetricAndBetaIndependent) {
  for (int N = 2; N <= 5; ++N) {
    for (int L = 0; L <= 10; ++L) {
      const Eigen::MatrixXd d = dense(delta_matrix(N, L));
      EXPECT_LT((d - d.transpose()).cwiseAbs().maxCoeff(), 1e-12) << N << " " << L;
      const Eigen::MatrixXd d2 = dense(delta_matrix(N, L, 0.5));
      EXPECT_LT((d - d2).cwiseAbs().maxCoeff(), 1e-12) << N << " " << L;
    }
  }
}

TEST(LLLDelta, MatchesSecondQuantizedAssembly) {
  for (int N = 2; N <= 4; ++N) {
    for (int L = 0; L <= 12; ++L) {
      const auto block = delta_matrix(N, L);
      const Eigen::MatrixXd ref = coldgas::oracle::second_quantized_delta(occupations(block.basis), L);
      EXPECT_LT((dense(block) - ref).cwiseAbs().maxCoeff(), 1e-12) << N << " " << L;
    }
  }
  // the N = 3, L = 3 spectrum from the oracle matrix
  const auto block = delta_matrix(3, 3);
  const Eigen::MatrixXd ref = coldgas::oracle::second_quantized_delta(occupations(block.basis), 3);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ref);
  EXPECT_NEAR(yrast(3, 3).delta_min, es.eigenvalues()(0), 1e-13);
}

TEST(LLLYrast, ClosedFormExamples) {
  EXPECT_NEAR(yrast(4, 4).delta_min, 2 * kUnit, 1e-12);
  EXPECT_NEAR(yrast(3, 1).delta_min, 3 * kUnit, 1e-12);
  EXPECT_NEAR(*yrast_closed_form(5, 0), 10 * kUnit, 1e-15);
  EXPECT_NEAR(*yrast_closed_form(5, 4), 5 * kUnit, 1e-15);
  EXPECT_FALSE(yrast_closed_form(4, 7).has_value());
  EXPECT_EQ(*yrast_closed_form(4, 12), 0.0);
  EXPECT_EQ(*yrast_closed_form(4, 13), 0.0);
}

TEST(LLLYrast, AgreesWithClosedFormWhereKnown) {
  for (int N = 2; N <= 6; ++N) {
    const int top = N * (N - 1);
    for (int L = 0; L <= top + 1; ++L) {
      const auto cf = yrast_closed_form(N, L);
      if (!cf) continue;
      EXPECT_NEAR(yrast(N, L).delta_min, *cf, 1e-9) << N << " " << L;
    }
  }
}

TEST(LLLYrast, BoundedByZeroAngularMomentum) {
  const auto table = yrast_table(5, 20);
  for (const auto& p : table) EXPECT_LE(p.delta_min, table[0].delta_min + 1e-12);
  EXPECT_NEAR(table[20].delta_min, 0.0, 1e-12);
}

TEST(LLLLaughlin, ThreeParticleGroundVector) {
  const auto pt = yrast(3, 6);
  EXPECT_NEAR(pt.delta_min, 0.0, 1e-12);
  const auto res = laughlin_residual(3);
  EXPECT_NEAR(std::abs(pt.ground_vector.dot(res.vector)), 1.0, 1e-10);
}

TEST(LLLLaughlin, CoefficientsMatchExpansion) {
  for (int N = 2; N <= 5; ++N) {
    const auto basis = enumerate_basis(N, N * (N - 1));
    const auto coeffs = laughlin_coefficients(basis);
    const auto poly = coldgas::oracle::laughlin_expansion(N);
    for (std::size_t i = 0; i < basis.size(); ++i) {
      auto key = basis.states[i].parts;  // decreasing exponents z1^l1 z2^l2 ...
      const auto it = poly.find(key);
      EXPECT_EQ(coeffs[i], it == poly.end() ? 0 : it->second) << N << " " << i;
    }
  }
}

TEST(LLLLaughlin, ZeroMode) {
  EXPECT_NEAR(laughlin_residual(2).residual, 0.0, 1e-15);
  for (int N = 3; N <= 5; ++N) EXPECT_LE(laughlin_residual(N).residual, 1e-9) << N;
}

TEST(LLLScan, LimitsAndHull) {
  const int N = 3;
  const auto table = yrast_table(N, N * (N - 1));
  const double jump = (table[0].delta_min - table[2].delta_min) / 2.0;
  const auto rows = hll_ground_scan(table, {0.0, 0.5 * jump, jump * 0.999, jump * 1.001, 10.0});
  EXPECT_EQ(rows.front().L_star, 6);
  EXPECT_EQ(rows.back().L_star, 0);
  EXPECT_NEAR(rows.back().E0, table[0].delta_min, 1e-15);
  EXPECT_EQ(rows[3].L_star, 0);
  EXPECT_GE(rows[2].L_star, 2);
  for (const auto& r : rows) EXPECT_NE(r.L_star, 1);
}

TEST(LLLScan, HullMatchesBruteForce) {
  for (int N = 2; N <= 6; ++N) {
    const auto table = yrast_table(N, N * (N - 1));
    std::vector<double> y;
    for (const auto& p : table) y.push_back(p.delta_min);
    EXPECT_EQ(hull_vertices(table), coldgas::oracle::lower_hull_brute(y, 1e-12)) << N;
  }
  EXPECT_EQ(hull_vertices(yrast_table(4, 12)), (std::vector<int>{0, 4, 8, 12}));
  EXPECT_EQ(hull_vertices(yrast_table(2, 2)), (std::vector<int>{0, 2}));
}

TEST(LLLScan, BreakpointsSeparateHullVertices) {
  const auto table = yrast_table(4, 12);
  const auto verts = hull_vertices(table);
  const auto breaks = hull_breakpoints(table);
  ASSERT_EQ(breaks.size() + 1, verts.size());
  for (std::size_t i = 0; i < breaks.size(); ++i) {
    const auto above = hll_ground_scan(table, {breaks[i] * (1 + 1e-9)});
    const auto below = hll_ground_scan(table, {breaks[i] * (1 - 1e-9)});
    EXPECT_EQ(above[0].L_star, verts[i]);
    EXPECT_EQ(below[0].L_star, verts[i + 1]);
  }
}
