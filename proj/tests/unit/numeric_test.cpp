#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "oracles.hpp"
#include "radonlik/error.hpp"
#include "radonlik/numeric.hpp"
#include "radonlik/parallel.hpp"
#include "radonlik/random.hpp"

using namespace radonlik;

TEST(Numeric, SafeLogOfZeroIsNegInf) {
  EXPECT_EQ(safe_log(0.0), kNegInf);
  EXPECT_DOUBLE_EQ(safe_log(std::numbers::e), 1.0);
}

TEST(Numeric, LogAddHandlesInfinities) {
  EXPECT_EQ(log_add(kNegInf, kNegInf), kNegInf);
  EXPECT_DOUBLE_EQ(log_add(kNegInf, 2.0), 2.0);
  EXPECT_NEAR(log_add(std::log(0.25), std::log(0.5)), std::log(0.75), 1e-15);
  EXPECT_NEAR(log_add(1000.0, 1000.0), 1000.0 + std::log(2.0), 1e-12);
}

TEST(Numeric, LogSumExpMatchesDirectSum) {
  const std::vector<double> v{std::log(0.1), std::log(0.2), kNegInf, std::log(0.3)};
  EXPECT_NEAR(log_sum_exp(v), std::log(0.6), 1e-15);
  EXPECT_EQ(log_sum_exp(std::vector<double>{}), kNegInf);
}

TEST(Numeric, NormalHelpersAgreeWithOracle) {
  for (double z : {-3.0, -0.4, 0.0, 1.1, 5.0}) {
    EXPECT_NEAR(standard_normal_cdf(z), oracle::normal_cdf(z), 1e-15);
    EXPECT_NEAR(std::exp(normal_log_pdf(z, 0.3, 2.0)), oracle::normal_pdf(z, 0.3, 2.0), 1e-15);
  }
  EXPECT_NEAR(standard_normal_pdf(0.0), 0.3989422804014327, 1e-16);
}

TEST(Numeric, IntegrateGaussianOverTheLine) {
  EXPECT_NEAR(integrate([](double x) { return oracle::normal_pdf(x, 0.0, 1.0); }, -kInf, kInf),
              1.0, 1e-12);
  EXPECT_NEAR(integrate([](double x) { return x * x; }, 0.0, 3.0), 9.0, 1e-12);
}

TEST(Numeric, IntegrateRejectsNan) {
  EXPECT_THROW(integrate([](double) { return std::nan(""); }, 0.0, 1.0), NumericalError);
}

TEST(Numeric, IntegrateSplitHandlesKinks) {
  const std::vector<double> cuts{0.5};
  const double v =
      integrate_split([](double x) { return std::abs(x - 0.5); }, 0.0, 1.0, cuts, 1e-13);
  EXPECT_NEAR(v, 0.25, 1e-14);
}

TEST(Numeric, TrapezoidExactOnLines) {
  const std::vector<double> v{0.0, 1.0, 2.0, 3.0};
  EXPECT_DOUBLE_EQ(trapezoid(v, 0.5), 2.25);
  EXPECT_EQ(trapezoid(std::vector<double>{1.0}, 0.1), 0.0);
}

TEST(Numeric, LinspaceEndpointsExact) {
  const auto v = linspace(0.1, 0.7, 7);
  ASSERT_EQ(v.size(), 7u);
  EXPECT_EQ(v.front(), 0.1);
  EXPECT_EQ(v.back(), 0.7);
  EXPECT_EQ(linspace(2.0, 5.0, 1), std::vector<double>{2.0});
}

TEST(Random, StreamsAreReproducibleAndDistinct) {
  Rng a = make_stream(42, {1, 2});
  Rng b = make_stream(42, {1, 2});
  Rng c = make_stream(42, {1, 3});
  const auto a1 = a();
  EXPECT_EQ(a1, b());
  EXPECT_NE(a1, c());
}

TEST(Random, UniformOpenStaysInside) {
  Rng r = make_stream(7);
  for (int i = 0; i < 100000; ++i) {
    const double u = uniform_open(r);
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(Parallel, VisitsEveryIndexOnce) {
  for (std::size_t threads : {1u, 3u, 8u}) {
    set_thread_count(threads);
    std::vector<std::atomic<int>> hits(1000);
    parallel_for(hits.size(), [&](std::size_t i) { hits[i]++; });
    for (const auto& h : hits) ASSERT_EQ(h.load(), 1);
  }
  set_thread_count(0);
}

TEST(Parallel, RethrowsBodyException) {
  set_thread_count(4);
  EXPECT_THROW(parallel_for(100,
                            [](std::size_t i) {
                              if (i == 37) throw std::runtime_error("boom");
                            }),
               std::runtime_error);
  set_thread_count(0);
}
