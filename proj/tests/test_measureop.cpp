#include <gtest/gtest.h>

#include <Eigen/Dense>

#include <cmath>
#include <sstream>

#include "alc/measureop.hpp"
#include "alc/setgen.hpp"

using alc::Index;
using alc::Matrix;
using alc::MeasurementMatrix;
using alc::Vector;

TEST(SampleMatrix, Deterministic) {
  EXPECT_EQ(alc::sample_matrix(2, 4, 1).entries(), alc::sample_matrix(2, 4, 1).entries());
  EXPECT_NE(alc::sample_matrix(2, 4, 1).entries(), alc::sample_matrix(2, 4, 2).entries());
}

TEST(SampleMatrix, FullRank) {
  const auto a = alc::sample_matrix(3, 8, 5);
  const Vector sv = Eigen::JacobiSVD<Matrix>(a.entries()).singularValues();
  EXPECT_GT(sv(2), 1e-8);
  EXPECT_EQ(alc::numerical_rank(a.entries()), 3);
}

TEST(SampleMatrix, SampleMeanSanity) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const double mean = alc::sample_matrix(4, 4, seed).entries().mean();
    EXPECT_GT(mean, -0.6);
    EXPECT_LT(mean, 0.6);
  }
}

TEST(SampleMatrix, TallerDrawExtendsShorter) {
  const auto small = alc::sample_matrix(3, 10, 17);
  const auto big = alc::sample_matrix(7, 10, 17);
  EXPECT_EQ(big.entries().topRows(3), small.entries());
}

TEST(SampleMatrix, RejectsWideShape) { EXPECT_THROW(alc::sample_matrix(5, 4, 0), alc::invalid_argument); }

TEST(MeasurementMatrix, RejectsNonFinite) {
  Matrix bad = Matrix::Zero(1, 2);
  bad(0, 1) = INFINITY;
  EXPECT_THROW(MeasurementMatrix{bad}, alc::invalid_argument);
}

TEST(Apply, Projection) {
  Matrix e = Matrix::Zero(2, 3);
  e.leftCols(2).setIdentity();
  const Vector y = alc::apply(MeasurementMatrix(e), Vector((Vector(3) << 1, 2, 3).finished()));
  EXPECT_EQ(y, Vector((Vector(2) << 1, 2).finished()));
}

TEST(Apply, ZeroVector) {
  EXPECT_EQ(alc::apply(alc::sample_matrix(3, 5, 1), Vector::Zero(5)), Vector::Zero(3));
}

TEST(Apply, MatchesHandDotProducts) {
  const auto a = alc::sample_matrix(3, 6, 21);
  const Vector x = alc::embed(alc::gen_sparse(6, 2, 22));
  const Vector y = alc::apply(a, x);
  for (Index i = 0; i < 3; ++i) {
    double acc = 0.0;
    for (Index j = 0; j < 6; ++j) acc += a.entries()(i, j) * x(j);
    EXPECT_NEAR(y(i), acc, 1e-12);
  }
}

TEST(Apply, DimensionMismatch) {
  EXPECT_THROW(alc::apply(alc::sample_matrix(2, 4, 0), Vector::Zero(3)), alc::invalid_argument);
}

TEST(KernelBasis, UnitRow) {
  Matrix e = Matrix::Zero(1, 3);
  e(0, 0) = 1.0;
  const MeasurementMatrix a(e);
  const auto kb = alc::kernel_basis(a);
  ASSERT_EQ(kb.size(), 2);
  for (Index c = 0; c < 2; ++c) {
    EXPECT_NEAR(kb.vectors(0, c), 0.0, 1e-15);
    EXPECT_NEAR(alc::apply(a, kb.vectors.col(c)).norm(), 0.0, 1e-15);
  }
}

TEST(KernelBasis, ZeroMatrix) { EXPECT_EQ(alc::kernel_basis(MeasurementMatrix(Matrix::Zero(2, 3))).size(), 3); }

TEST(KernelBasis, RandomMatrix) {
  const auto a = alc::sample_matrix(3, 5, 3);
  const auto kb = alc::kernel_basis(a);
  ASSERT_EQ(kb.size(), 2);
  EXPECT_LT((kb.vectors.transpose() * kb.vectors - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-10);
  for (Index c = 0; c < kb.size(); ++c) EXPECT_LT(alc::apply(a, kb.vectors.col(c)).norm(), 1e-10);
}

TEST(KernelBasis, RankPlusNullityWithDeficientRank) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Matrix e = alc::sample_matrix(4, 7, seed).entries();
    e.row(3) = e.row(0) - 2.0 * e.row(1);  // rank 3
    const MeasurementMatrix a(e);
    const auto kb = alc::kernel_basis(a);
    EXPECT_EQ(kb.rank, 3);
    EXPECT_EQ(alc::numerical_rank(e) + kb.size(), 7);
    for (Index c = 0; c < kb.size(); ++c) EXPECT_LE(alc::apply(a, kb.vectors.col(c)).norm(), kb.tol * 10);
  }
}

TEST(Nsp, SparseFamilyAboveThreshold) {
  const auto a = alc::sample_matrix(3, 10, 2);
  const auto r = alc::nsp_min_gain(a, alc::sparse_family(10, 2), 20000, 3);
  EXPECT_GT(r.min_gain, 1e-4);
  EXPECT_NEAR(r.argmin_u.norm(), 1.0, 1e-12);
  EXPECT_NEAR(alc::apply(a, r.argmin_u).norm(), r.min_gain, 1e-12);
}

TEST(Nsp, ZeroColumnHitsKernel) {
  Matrix e = alc::sample_matrix(3, 6, 4).entries();
  e.col(0).setZero();
  const auto r = alc::nsp_min_gain(MeasurementMatrix(e), alc::fixed_support_family(6, {0}), 10, 1);
  EXPECT_EQ(r.min_gain, 0.0);
}

TEST(Nsp, SingleTrialMatchesApply) {
  const auto a = alc::sample_matrix(2, 5, 6);
  const auto family = alc::sparse_family(5, 2);
  const auto r = alc::nsp_min_gain(a, family, 1, 9);
  const Vector u = family(alc::mix(alc::mix(9, 0), 0)).normalized();
  EXPECT_NEAR(r.min_gain, alc::apply(a, u).norm(), 1e-15);
  EXPECT_EQ(r.argmin_trial, 0);
}

TEST(Nsp, MonotoneInTrials) {
  const auto a = alc::sample_matrix(3, 10, 8);
  double prev = INFINITY;
  for (std::int64_t trials : {1, 10, 100, 1000, 5000}) {
    const double g = alc::nsp_min_gain(a, alc::sparse_family(10, 2), trials, 4).min_gain;
    EXPECT_LE(g, prev);
    prev = g;
  }
}

TEST(Nsp, ScaleEquivariant) {
  const auto a = alc::sample_matrix(3, 10, 9);
  const double g = alc::nsp_min_gain(a, alc::sparse_family(10, 2), 2000, 5).min_gain;
  const double g3 = alc::nsp_min_gain(a.scaled(3.0), alc::sparse_family(10, 2), 2000, 5).min_gain;
  EXPECT_NEAR(g3, 3.0 * g, 1e-12 * g3);
}

TEST(Nsp, ThreadCountDoesNotMatter) {
  const auto a = alc::sample_matrix(3, 10, 10);
  const auto r1 = alc::nsp_min_gain(a, alc::sparse_family(10, 2), 3000, 6, 1);
  const auto r4 = alc::nsp_min_gain(a, alc::sparse_family(10, 2), 3000, 6, 4);
  EXPECT_EQ(r1.min_gain, r4.min_gain);
  EXPECT_EQ(r1.argmin_trial, r4.argmin_trial);
}

TEST(Nsp, RejectsZeroTrials) {
  EXPECT_THROW(alc::nsp_min_gain(alc::sample_matrix(2, 4, 0), alc::sparse_family(4, 1), 0, 0), alc::invalid_argument);
}

TEST(PairGain, KronFamilyAboveThreshold) {
  const auto a = alc::sample_matrix(4, 16, 11);
  const auto r = alc::pair_min_gain(a, alc::kron_family(4, 4, 2, 2), 5000, 12);
  EXPECT_GT(r.min_gain, 1e-4);
  EXPECT_NEAR(r.argmin_u.norm(), 1.0, 1e-12);
}

TEST(Witness, OneRowCancellation) {
  Matrix e(1, 4);
  e << 2.0, -3.0, 0.5, 1.0;
  const MeasurementMatrix a(e);
  const auto u = alc::sparse_kernel_witness(a, 2);
  ASSERT_TRUE(u.has_value());
  EXPECT_NEAR(alc::apply(a, *u).norm(), 0.0, 1e-15);
  // proportional to (a1, -a0, 0, 0)
  EXPECT_NEAR(std::abs((*u)(0) * 2.0 + (*u)(1) * -3.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs((*u)(0) / (*u)(1)), 3.0 / 2.0, 1e-14);
  EXPECT_EQ((*u)(2), 0.0);
  EXPECT_EQ((*u)(3), 0.0);
}

TEST(Witness, RandomAboveThreshold) {
  const auto a = alc::sample_matrix(3, 10, 13);
  const auto u = alc::sparse_kernel_witness(a, 4);
  ASSERT_TRUE(u.has_value());
  EXPECT_LE((u->array() != 0.0).count(), 4);
  EXPECT_NEAR(u->norm(), 1.0, 1e-12);
  EXPECT_LT(alc::apply(a, *u).norm(), 1e-10);
}

TEST(Witness, NoneAtThreshold) { EXPECT_FALSE(alc::sparse_kernel_witness(alc::sample_matrix(3, 10, 1), 3)); }

TEST(Witness, AlwaysUnitAndInKernel) {
  for (std::uint64_t seed = 0; seed < 50; ++seed)
    for (Index n : {1, 2, 5}) {
      const auto a = alc::sample_matrix(n, 12, seed);
      const auto u = alc::sparse_kernel_witness(a, n + 1);
      ASSERT_TRUE(u);
      EXPECT_NEAR(u->norm(), 1.0, 1e-12);
      EXPECT_LE(alc::apply(a, *u).norm(), 1e-10);
    }
}

TEST(MatrixCsv, RoundTrip) {
  const auto a = alc::sample_matrix(3, 5, 99);
  std::stringstream io;
  alc::write_csv(io, a);
  EXPECT_EQ(io.str().substr(0, 9), "# 3 5 99\n");
  const auto b = alc::read_matrix_csv(io);
  EXPECT_EQ(b.entries(), a.entries());
  EXPECT_EQ(b.seed(), 99u);
}

TEST(NspReport, Json) {
  const auto r = alc::nsp_min_gain(alc::sample_matrix(2, 4, 1), alc::sparse_family(4, 1), 5, 1);
  const auto j = alc::to_json(r);
  EXPECT_EQ(j["trials"], 5);
  EXPECT_EQ(j["argmin_u"].size(), 4u);
}
