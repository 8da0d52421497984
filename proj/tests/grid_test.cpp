#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "slowfast/grid.hpp"
#include "slowfast/random_fields.hpp"
#include "support.hpp"

using namespace slowfast;
using slowfast::testing::cosine;
using slowfast::testing::pi;

TEST(Grid, FiveNodeInterval) {
    const GridPtr g = Grid::interval(pi, 5);
    EXPECT_EQ(g->dimension(), 1);
    EXPECT_EQ(g->size(), 5u);
    EXPECT_DOUBLE_EQ(g->spacing(0), pi / 4);
    EXPECT_DOUBLE_EQ(g->coordinate(0, 4), pi);
}

TEST(Grid, WeightsSumToMeasure) {
    const GridPtr g = Grid::interval(pi, 129);
    double s = 0.0;
    for (double w : g->weights()) s += w;
    EXPECT_NEAR(s, pi, 1e-12);

    const GridPtr r = Grid::rectangle(2.0, 3.0, 17, 9);
    s = 0.0;
    for (double w : r->weights()) s += w;
    EXPECT_NEAR(s, 6.0, 1e-12);
    EXPECT_DOUBLE_EQ(r->measure(), 6.0);
}

TEST(Grid, RejectsBadInput) {
    EXPECT_THROW(Grid::interval(0.0, 5), std::invalid_argument);
    EXPECT_THROW(Grid::interval(-1.0, 5), std::invalid_argument);
    EXPECT_THROW(Grid::interval(1.0, 2), std::invalid_argument);
    EXPECT_THROW(Grid::rectangle(1.0, 1.0, 5, 2), std::invalid_argument);
    const std::vector<double> l{1.0};
    const std::vector<std::size_t> n{5};
    EXPECT_THROW(Grid::build(3, l, n), std::invalid_argument);
    EXPECT_THROW(Grid::build(2, l, n), std::invalid_argument);
}

TEST(Grid, FlatIndexIsXFastest) {
    const GridPtr g = Grid::rectangle(1.0, 2.0, 5, 3);
    const auto [i, j] = g->unflatten(7);
    EXPECT_EQ(i, 2u);
    EXPECT_EQ(j, 1u);
    const auto p = g->point(7);
    EXPECT_DOUBLE_EQ(p[0], 0.5);
    EXPECT_DOUBLE_EQ(p[1], 1.0);
}

TEST(Laplacian, ConstantIsKernelExactly) {
    for (const GridPtr& g : {Grid::interval(pi, 257), Grid::interval(1.3, 3), Grid::rectangle(pi, 2.0, 33, 17)}) {
        const Field lap = laplacian(Field(g, 3.7));
        for (double v : lap.values()) EXPECT_EQ(v, 0.0);
    }
}

TEST(Laplacian, CosineConvergesAtSecondOrder) {
    double previous = 0.0;
    for (std::size_t n : {65u, 129u, 257u}) {
        const GridPtr g = Grid::interval(pi, n);
        Field r = laplacian(cosine(g));
        r += cosine(g);
        const double e = r.linf_norm();
        if (previous > 0.0) {
            EXPECT_NEAR(previous / e, 4.0, 0.1);
        }
        previous = e;
    }
}

TEST(Laplacian, QuadraticMatchesHandStencil) {
    const std::size_t n = 11;
    const GridPtr g = Grid::interval(1.0, n);
    const Field u = Field::from_function(g, [](double x, double) { return x * x; });
    const Field lap = laplacian(u);
    const double h = 0.1;
    for (std::size_t i = 1; i + 1 < n; ++i) EXPECT_NEAR(lap[i], 2.0, 1e-10);
    // Mirrored ghost: u(-h) = u(h) and u(1+h) = u(1-h).
    EXPECT_NEAR(lap[0], 2.0 * (u[1] - u[0]) / (h * h), 1e-10);
    EXPECT_NEAR(lap[0], 2.0, 1e-10);
    EXPECT_NEAR(lap[n - 1], 2.0 * (u[n - 2] - u[n - 1]) / (h * h), 1e-10);
    EXPECT_NEAR(lap[n - 1], 2.0 - 4.0 / h, 1e-9);
}

TEST(Laplacian, RejectsMismatchedGrid) {
    const Field a(Grid::interval(1.0, 5), 1.0);
    const Field b(Grid::interval(1.0, 7), 1.0);
    EXPECT_THROW(inner(a, b), std::invalid_argument);
    Field c = a;
    EXPECT_THROW(c += b, std::invalid_argument);
}

class LaplacianProperty : public ::testing::TestWithParam<int> {};

TEST_P(LaplacianProperty, SymmetricAndSemidefinite) {
    const GridPtr g = GetParam() == 1 ? Grid::interval(pi, 129) : Grid::rectangle(pi, 2.0, 33, 21);
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const Field u = random_band_limited(g, 12, rng, 1.0, true);
        const Field v = random_band_limited(g, 12, rng, 1.0, true);
        const double a = inner(laplacian(u), v);
        const double b = inner(u, laplacian(v));
        EXPECT_LE(std::abs(a - b), 1e-12 * std::max(std::abs(a), std::abs(b)));
        EXPECT_LE(inner(laplacian(u), u), 1e-12 * inner(u, u));
        EXPECT_NEAR(dirichlet_form(u), -inner(laplacian(u), u), 1e-10 * dirichlet_form(u));
    }
}

INSTANTIATE_TEST_SUITE_P(Dimensions, LaplacianProperty, ::testing::Values(1, 2));

TEST(Eigenpairs, IntervalLowModes) {
    const auto e = neumann_eigenpairs(Grid::interval(pi, 129), 3);
    ASSERT_EQ(e.size(), 3u);
    EXPECT_DOUBLE_EQ(e[0].eigenvalue, 0.0);
    EXPECT_DOUBLE_EQ(e[1].eigenvalue, 1.0);
    EXPECT_DOUBLE_EQ(e[2].eigenvalue, 4.0);
    EXPECT_NEAR(e[0].eigenfunction.max() - e[0].eigenfunction.min(), 0.0, 1e-15);
}

TEST(Eigenpairs, SquareIsDoublyDegenerate) {
    const auto e = neumann_eigenpairs(Grid::rectangle(pi, pi, 33, 33), 3);
    EXPECT_DOUBLE_EQ(e[0].eigenvalue, 0.0);
    EXPECT_DOUBLE_EQ(e[1].eigenvalue, 1.0);
    EXPECT_DOUBLE_EQ(e[2].eigenvalue, 1.0);
    const auto m = e[1].modes;
    EXPECT_TRUE((m[0] == 1 && m[1] == 0) || (m[0] == 0 && m[1] == 1));
}

TEST(Eigenpairs, ResidualDropsByFourUnderHalving) {
    auto residual = [](std::size_t n) {
        const auto e = neumann_eigenpairs(Grid::interval(pi, n), 2)[1];
        Field r = laplacian(e.eigenfunction);
        r += e.eigenvalue * e.eigenfunction;
        return r.linf_norm();
    };
    const double coarse = residual(129);
    const double fine = residual(257);
    EXPECT_NEAR(coarse / fine, 4.0, 0.05);
    const double h = pi / 128;
    EXPECT_LE(coarse, 0.1 * h * h);
}

TEST(Eigenpairs, DiscreteEigenvalueIsExact) {
    const GridPtr g = Grid::rectangle(pi, 2.0, 17, 13);
    for (const auto& e : neumann_eigenpairs(g, 10)) {
        Field r = laplacian(e.eigenfunction);
        r += e.discrete_eigenvalue * e.eigenfunction;
        EXPECT_LE(r.linf_norm(), 1e-9);
    }
    EXPECT_THROW(neumann_eigenpairs(g, 0), std::invalid_argument);
}

TEST(Eigenpairs, SortedAscending) {
    const auto e = neumann_eigenpairs(Grid::rectangle(pi, 2.0, 17, 13), 20);
    for (std::size_t i = 1; i < e.size(); ++i) EXPECT_LE(e[i - 1].eigenvalue, e[i].eigenvalue);
}

TEST(Field, NormsAndMeans) {
    const GridPtr g = Grid::interval(2.0, 201);
    const Field c(g, -3.0);
    EXPECT_NEAR(c.mean(), -3.0, 1e-14);
    EXPECT_NEAR(c.integral(), -6.0, 1e-12);
    EXPECT_NEAR(c.l2_norm(), 3.0 * std::sqrt(2.0), 1e-12);
    EXPECT_NEAR(c.lq_norm(4.0), 3.0 * std::pow(2.0, 0.25), 1e-12);
    EXPECT_DOUBLE_EQ(c.linf_norm(), 3.0);
    const Field x = Field::from_function(g, [](double x, double) { return x; });
    EXPECT_NEAR(x.mean(), 1.0, 1e-14);
    EXPECT_NEAR(x.remeaned().mean(), 0.0, 1e-15);
    EXPECT_DOUBLE_EQ(x.min(), 0.0);
    EXPECT_DOUBLE_EQ(x.max(), 2.0);
}

TEST(Field, OrderIsNodewise) {
    const GridPtr g = Grid::interval(1.0, 5);
    Field a(g, 1.0), b(g, 0.5);
    EXPECT_TRUE(a.dominates(b));
    b[3] = 1.0 + 1e-13;
    EXPECT_FALSE(a.dominates(b));
    EXPECT_TRUE(a.dominates(b, 1e-12));
}

TEST(Field, CsvRoundTripIsExact) {
    const GridPtr g = Grid::rectangle(pi, 1.0, 9, 5);
    std::mt19937_64 rng(3);
    const Field f = random_band_limited(g, 4, rng);
    std::stringstream ss;
    write_field_csv(ss, f);
    const std::string text = ss.str();
    EXPECT_EQ(text.rfind("x,y,u\n", 0), 0u);
    const Field back = read_field_csv(ss, g);
    for (std::size_t n = 0; n < f.size(); ++n) EXPECT_EQ(back[n], f[n]);
}

TEST(Field, CsvRejectsWrongShape) {
    const GridPtr g = Grid::interval(1.0, 3);
    std::stringstream short_file("x,u\n0,1\n0.5,2\n");
    EXPECT_THROW(read_field_csv(short_file, g), std::runtime_error);
    std::stringstream wrong_coord("x,u\n0,1\n0.7,2\n1,3\n");
    EXPECT_THROW(read_field_csv(wrong_coord, g), std::runtime_error);
}

TEST(Field, H1NormOfConstant) {
    const GridPtr g = Grid::interval(pi, 65);
    EXPECT_NEAR(h1_norm(Field(g, 1.0)), std::sqrt(pi), 1e-12);
    // Trapezoid sum of sin^2 over a full period of nodes is exact up to roundoff.
    EXPECT_NEAR(dirichlet_form(cosine(g)), 4.0 / (g->spacing(0) * g->spacing(0)) *
                                               std::pow(std::sin(g->spacing(0) / 2.0), 2) * pi / 2.0,
                1e-10);
}
