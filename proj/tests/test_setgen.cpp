#include <gtest/gtest.h>

#include <Eigen/Dense>

#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "alc/setgen.hpp"

using alc::Index;
using alc::Matrix;
using alc::Vector;

namespace {

Index nonzeros(const Vector& x) { return (x.array() != 0.0).count(); }

Matrix reshape_rows(const Vector& x, Index k, Index l) {
  Matrix m(k, l);
  for (Index i = 0; i < k; ++i)
    for (Index j = 0; j < l; ++j) m(i, j) = x(i * l + j);
  return m;
}

}  // namespace

TEST(GenSparse, FullSupportWhenSEqualsM) {
  for (std::uint64_t seed : {0ULL, 1ULL, 77ULL}) {
    const auto sig = alc::gen_sparse(5, 5, seed);
    EXPECT_EQ(sig.support, (std::vector<Index>{0, 1, 2, 3, 4}));
  }
}

TEST(GenSparse, OneNonzeroForSOne) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) EXPECT_EQ(nonzeros(alc::embed(alc::gen_sparse(6, 1, seed))), 1);
}

TEST(GenSparse, Deterministic) {
  const auto a = alc::gen_sparse(20, 3, 42);
  const auto b = alc::gen_sparse(20, 3, 42);
  EXPECT_EQ(a.support, b.support);
  EXPECT_EQ(a.values, b.values);
}

TEST(GenSparse, RejectsBadSparsity) {
  EXPECT_THROW(alc::gen_sparse(5, 0, 1), alc::invalid_argument);
  EXPECT_THROW(alc::gen_sparse(5, 6, 1), alc::invalid_argument);
}

TEST(GenSparse, SupportsAreUniform) {
  std::map<std::vector<Index>, int> hist;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) ++hist[alc::gen_sparse(5, 2, alc::mix(2024, static_cast<std::uint64_t>(i))).support];
  ASSERT_EQ(hist.size(), 10u);
  for (const auto& [support, count] : hist) EXPECT_NEAR(static_cast<double>(count) / draws, 0.1, 0.01);
}

TEST(GenKron, SingleNonzero) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) EXPECT_EQ(nonzeros(alc::embed(alc::gen_kron(2, 2, 1, 1, seed))), 1);
}

TEST(GenKron, RankOneWithFourNonzeros) {
  const Vector x = alc::embed(alc::gen_kron(4, 4, 2, 2, 7));
  EXPECT_EQ(nonzeros(x), 4);
  const Eigen::JacobiSVD<Matrix> svd(reshape_rows(x, 4, 4));
  EXPECT_LT(svd.singularValues()(1), 1e-10 * svd.singularValues()(0));
}

TEST(GenKron, AlwaysRankOneAndNormalized) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto sig = alc::gen_kron(6, 5, 3, 2, seed);
    EXPECT_EQ(sig.a_values.front(), 1.0);
    const Vector x = alc::embed(sig);
    EXPECT_EQ(nonzeros(x), 6);
    const Eigen::JacobiSVD<Matrix> svd(reshape_rows(x, 6, 5));
    EXPECT_LT(svd.singularValues()(1), 1e-10 * svd.singularValues()(0));
  }
}

TEST(GenKron, RejectsOversizedSupports) {
  EXPECT_THROW(alc::gen_kron(3, 3, 4, 1, 0), alc::invalid_argument);
  EXPECT_THROW(alc::gen_kron(3, 3, 1, 4, 0), alc::invalid_argument);
}

TEST(Embed, Sparse) {
  alc::SparseSignal sig{3, {1}, {2.5}};
  EXPECT_EQ(alc::embed(sig), Vector((Vector(3) << 0, 2.5, 0).finished()));
}

TEST(Embed, KroneckerIndexConvention) {
  alc::KroneckerSignal sig{2, 2, {0}, {1.0}, {1}, {3.0}};
  EXPECT_EQ(alc::embed(sig), Vector((Vector(4) << 0, 3, 0, 0).finished()));
  const alc::StructuredSignal any = sig;
  EXPECT_EQ(alc::embed(any), alc::embed(sig));
}

TEST(Embed, KroneckerScaleInvariance) {
  auto sig = alc::gen_kron(4, 3, 2, 2, 9);
  const Vector x = alc::embed(sig);
  for (auto& v : sig.a_values) v /= 3.0;
  for (auto& v : sig.b_values) v *= 3.0;
  EXPECT_LT((alc::embed(sig) - x).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(SetF, SmallCount) {
  const auto f = alc::gen_set_f(2);
  ASSERT_EQ(f.size(), 3);
  EXPECT_EQ(f.points()(0, 0), 0.0);
  EXPECT_EQ(f.points()(0, 1), 0.5);
  EXPECT_EQ(f.points()(0, 2), 1.0 / 3.0);
}

TEST(SetF, RangeAndSize) {
  const auto f = alc::gen_set_f(1000);
  EXPECT_EQ(f.size(), 1001);
  EXPECT_EQ(f.points().minCoeff(), 0.0);
  EXPECT_EQ(f.points().maxCoeff(), 0.5);
}

TEST(SetF, IntervalBlocks) {
  const auto f = alc::gen_set_f(1000);
  const auto blocks = alc::set_f_blocks(f, 50);
  ASSERT_EQ(blocks.size(), 51u);
  EXPECT_EQ(blocks.front().size(), 1);  // {1/2}
  for (std::size_t i = 1; i + 1 < blocks.size(); ++i) EXPECT_EQ(blocks[i].size(), 2);
  EXPECT_EQ(blocks.back().size(), 952);  // 0 and 1/51 .. 1/1001
}

TEST(Cantor, FirstLevels) {
  const auto c1 = alc::gen_cantor(1);
  ASSERT_EQ(c1.size(), 2);
  EXPECT_DOUBLE_EQ(c1.points()(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(c1.points()(0, 1), 2.0 / 3.0);
  const auto c2 = alc::gen_cantor(2);
  ASSERT_EQ(c2.size(), 4);
  const double expected[] = {0.0, 2.0 / 9.0, 2.0 / 3.0, 8.0 / 9.0};
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(c2.points()(0, i), expected[i], 1e-15);
}

TEST(Cantor, TernaryDigitsAreZeroOrTwo) {
  const int depth = 12;
  const auto c = alc::gen_cantor(depth);
  ASSERT_EQ(c.size(), 4096);
  const double scale = std::pow(3.0, depth);
  for (Index i = 0; i < c.size(); ++i) {
    auto code = static_cast<long long>(std::llround(c.points()(0, i) * scale));
    for (int d = 0; d < depth; ++d, code /= 3) EXPECT_NE(code % 3, 1);
    EXPECT_EQ(code, 0);
  }
}

TEST(Cantor, DepthLimit) { EXPECT_THROW(alc::gen_cantor(27), alc::resource_limit); }

TEST(Generators, Deterministic) {
  EXPECT_EQ(alc::gen_segment(100, 2, 3).points(), alc::gen_segment(100, 2, 3).points());
  EXPECT_EQ(alc::gen_square(100, 3, 3).points(), alc::gen_square(100, 3, 3).points());
  EXPECT_EQ(alc::gen_cube(100, 3, 3).points(), alc::gen_cube(100, 3, 3).points());
}

TEST(PointCloud, RejectsEmptyAndNonFinite) {
  EXPECT_THROW(alc::PointCloud(Matrix(2, 0)), alc::invalid_argument);
  Matrix bad(1, 2);
  bad << 0.0, std::nan("");
  EXPECT_THROW(alc::PointCloud{bad}, alc::invalid_argument);
}

TEST(PointCloud, CsvRoundTripIsExact) {
  const auto cloud = alc::gen_cube(50, 3, 8);
  std::stringstream io;
  alc::write_csv(io, cloud);
  EXPECT_EQ(io.str().substr(0, 9), "x0,x1,x2\n");
  EXPECT_EQ(alc::read_point_cloud_csv(io).points(), cloud.points());
}

TEST(ChartedSet, ValidatesCharts) {
  alc::ChartedSet set(1, 2);
  alc::Chart bad{Matrix::Zero(1, 3), Matrix::Zero(2, 2)};
  EXPECT_THROW(set.add(bad), alc::invalid_argument);
  EXPECT_THROW(alc::ChartedSet(3, 2), alc::invalid_argument);
}

TEST(Diam, Basics) {
  Matrix pts(2, 2);
  pts << 0, 3, 0, 4;
  EXPECT_DOUBLE_EQ(alc::diam(alc::PointCloud(pts)), 5.0);
  EXPECT_EQ(alc::diam(alc::PointCloud(Matrix::Ones(3, 1))), 0.0);
}

TEST(Diam, UnitSquareSample) {
  const double d = alc::diam(alc::gen_square(1000, 2, 4));
  EXPECT_GT(d, 1.3);
  EXPECT_LE(d, std::sqrt(2.0));
}

TEST(Diam, OrderAndTranslationInvariant) {
  const auto cloud = alc::gen_cube(300, 3, 5);
  const double d = alc::diam(cloud);
  Matrix reversed = cloud.points().rowwise().reverse();
  EXPECT_EQ(alc::diam(reversed), d);
  Matrix shifted = cloud.points().colwise() + Vector::Constant(3, 12.5);
  EXPECT_NEAR(alc::diam(shifted), d, 1e-12 * d * 20);
}

TEST(BallVolume, KnownValues) {
  EXPECT_NEAR(alc::ball_volume(1, 1), 2.0, 1e-14);
  EXPECT_NEAR(alc::ball_volume(2, 1), std::numbers::pi, 1e-14);
  EXPECT_NEAR(alc::ball_volume(3, 2), 32.0 * std::numbers::pi / 3.0, 1e-12);
  EXPECT_NEAR(alc::ball_volume(0, 1), 1.0, 1e-15);
}

TEST(BallVolume, ScalesAsRhoToTheK) {
  for (double k : {0.5, 1.0, 1.7, 2.0, 3.3, 7.0, 19.5})
    for (double rho : {0.1, 0.9, 2.5}) {
      const double expected = alc::ball_volume(k, 1.0) * std::pow(rho, k);
      EXPECT_NEAR(alc::ball_volume(k, rho), expected, 1e-12 * expected);
    }
}

TEST(BallVolume, HalfIntegerGamma) {
  // V(1/2, 1) = pi^(1/4) / Gamma(5/4); Gamma(5/4) = Gamma(1/4) / 4.
  const double gamma_quarter = 3.6256099082219083119;
  EXPECT_NEAR(alc::ball_volume(0.5, 1.0), std::pow(std::numbers::pi, 0.25) * 4.0 / gamma_quarter, 1e-12);
}
