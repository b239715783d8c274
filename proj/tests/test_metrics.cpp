/*
 Copyright 2026 The cyclopoly Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
#include <gtest/gtest.h>

#include <cmath>

#include "support.hpp"

namespace cp = cyclopoly;
using cp::Index;
using cp::Matrix;
using cp::testing::mat;

namespace {

TEST(Fit, PerfectModel) {
    const Matrix y = cp::generate_gaussian_signal(2, 100, 0.0, 1.0, 1);
    const auto f = cp::fit(y, y);
    for (const double v : f.per_output_fit) EXPECT_EQ(v, 100.0);
    EXPECT_EQ(f.mean_fit, 100.0);
}

TEST(Fit, MeanPredictorScoresZero) {
    const Matrix y = cp::generate_gaussian_signal(1, 50, 3.0, 2.0, 2);
    const Matrix ybar = Matrix::Constant(1, 50, y.mean());
    EXPECT_NEAR(cp::fit(y, ybar).per_output_fit[0], 0.0, 1e-12);
}

TEST(Fit, HandComputedValue) {
    const double expected = (1.0 - std::sqrt(0.5)) * 100.0;
    const double got = cp::fit(mat(1, 3, {1, 2, 3}), mat(1, 3, {1, 2, 4})).per_output_fit[0];
    EXPECT_NEAR(got, expected, 1e-8 * expected);
    EXPECT_NEAR(got, 29.29, 0.005);
}

TEST(Fit, ChannelsIndependentAndMeanIsArithmetic) {
    Matrix y(2, 3), yh(2, 3);
    y << 1, 2, 3, 10, 20, 40;
    yh << 1, 2, 4, 10, 20, 40;
    const auto f = cp::fit(y, yh);
    ASSERT_EQ(f.per_output_fit.size(), 2u);
    EXPECT_EQ(f.per_output_fit[1], 100.0);
    EXPECT_NEAR(f.mean_fit, 0.5 * (f.per_output_fit[0] + 100.0), 1e-12);
}

TEST(Fit, ScaleInvariant) {
    const Matrix y = cp::generate_gaussian_signal(2, 200, 0.0, 1.0, 3);
    const Matrix yh = y + 0.1 * cp::generate_gaussian_signal(2, 200, 0.0, 1.0, 4);
    const auto f1 = cp::fit(y, yh);
    const auto f2 = cp::fit(-7.5 * y, -7.5 * yh);
    for (std::size_t i = 0; i < 2; ++i) EXPECT_NEAR(f1.per_output_fit[i], f2.per_output_fit[i], 1e-10);
}

TEST(Fit, NeverAboveHundred) {
    cp::Rng rng(5);
    for (int t = 0; t < 50; ++t) {
        const Matrix y = cp::generate_gaussian_signal(1, 20, 0.0, 1.0, 100 + t);
        const Matrix yh = cp::generate_gaussian_signal(1, 20, 0.0, 1.0, 200 + t);
        EXPECT_LE(cp::fit(y, yh).per_output_fit[0], 100.0);
    }
}

TEST(Fit, Errors) {
    EXPECT_THROW((void)cp::fit(Matrix::Ones(1, 5), Matrix::Ones(1, 5)), cp::DegenerateReferenceError);
    EXPECT_THROW((void)cp::fit(Matrix::Ones(1, 5), Matrix::Ones(1, 4)), cp::DimensionError);
    EXPECT_THROW((void)cp::fit(mat(1, 1, {1}), mat(1, 1, {1})), cp::LengthError);
}

TEST(ParamError, ZeroAndSinglePerturbation) {
    const auto p = cp::benchmark_plant();
    EXPECT_EQ(cp::param_error(p, p), 0.0);
    Matrix a = p.A();
    a(2, 2) += 0.125;
    const cp::StateSpaceModel q(a, p.B(), p.C(), p.D());
    EXPECT_EQ(cp::param_error(p, q), 0.125 * 0.125);
}

TEST(ParamError, SymmetricAndSumOfSquares) {
    cp::Rng rng(6);
    const auto a = cp::testing::random_stable_system(rng, 3, 2, 2, 0.9, true);
    const auto b = cp::testing::random_stable_system(rng, 3, 2, 2, 0.9, true);
    EXPECT_EQ(cp::param_error(a, b), cp::param_error(b, a));
    double brute = 0.0;
    for (const auto& [x, y] : {std::pair{a.A(), b.A()}, std::pair{a.B(), b.B()}, std::pair{a.C(), b.C()},
                               std::pair{a.D(), b.D()}}) {
        for (Index k = 0; k < x.size(); ++k) brute += (x(k) - y(k)) * (x(k) - y(k));
    }
    EXPECT_NEAR(cp::param_error(a, b), brute, 1e-12 * brute);
    EXPECT_GT(cp::param_error(a, b), 0.0);
}

TEST(ParamError, DimensionMismatch) {
    const cp::StateSpaceModel s(mat(1, 1, {0.5}), mat(1, 1, {1}), mat(1, 1, {1}), mat(1, 1, {0}));
    EXPECT_THROW((void)cp::param_error(cp::benchmark_plant(), s), cp::DimensionError);
}

TEST(TotalVertexError, AdditiveAndExactSum) {
    const auto p = cp::benchmark_plant();
    EXPECT_EQ(cp::total_vertex_error(p, cp::VertexSet({p, p, p})), 0.0);

    Matrix c1 = p.C(), c2 = p.C();
    c1(0, 0) += std::sqrt(0.1);
    c2(1, 1) += std::sqrt(0.3);
    const cp::VertexSet vs({cp::StateSpaceModel(p.A(), p.B(), c1, p.D()), cp::StateSpaceModel(p.A(), p.B(), c2, p.D())});
    EXPECT_NEAR(cp::total_vertex_error(p, vs), 0.4, 1e-14);
    const auto e = cp::vertex_errors(p, vs);
    EXPECT_EQ(cp::total_vertex_error(p, vs), e[0] + e[1]);
}

}  // namespace
