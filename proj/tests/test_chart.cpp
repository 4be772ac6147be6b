#include "doctest.h"

#include "biharm/chart.hpp"
#include "biharm/fields.hpp"
#include "biharm/models.hpp"
#include "biharm/residual.hpp"
#include "oracles.hpp"

#include <cmath>

using namespace biharm;

namespace {

Point pt(std::initializer_list<double> v)
{
    Point x(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double c : v) {
        x[i++] = c;
    }
    return x;
}

double max_christoffel_gap(const Christoffel& G, const std::vector<Mat>& ref)
{
    double gap = 0.0;
    const int n = G.dim();
    for (int k = 0; k < n; ++k) {
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                gap = std::max(gap, std::abs(G(k, i, j) - ref[k](i, j)));
            }
        }
    }
    return gap;
}

} // namespace

TEST_CASE("sphere christoffels match the metric-derivative oracle")
{
    const auto S = models::sphere_stereo(3);
    FdConfig cfg{1e-4, true};
    for (const Point& x : {pt({0.1, -0.3, 0.2}), pt({0.7, 0.4, -0.5}), pt({-1.2, 0.3, 0.9})}) {
        const auto ref = oracle::christoffel(oracle::sphere_metric, x);
        CHECK(max_christoffel_gap(christoffel(S, x, cfg), ref) < 1e-9);

        ChartManifold fd_only = S;
        fd_only.analytic_christoffel = {};
        CHECK(max_christoffel_gap(christoffel(fd_only, x, cfg), ref) < 1e-8);
    }
}

TEST_CASE("stereographic spheres are Einstein with constant n-1")
{
    FdConfig cfg{1e-4, true};
    for (int n : {2, 3, 4}) {
        auto S = models::sphere_stereo(n);
        S.analytic_ricci = {};
        Point x = Point::Constant(n, 0.3);
        x[0] = -0.6;
        const Mat ric = ricci_operator(S, x, cfg);
        CHECK((ric - (n - 1) * Mat::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-6);
    }
}

TEST_CASE("euclidean space is flat")
{
    const auto E = models::euclidean(4);
    const Point x = pt({0.3, -1.0, 2.0, 0.5});
    const auto curv = riemann_and_ricci(E, x, FdConfig{});
    CHECK(curv.ricci.cwiseAbs().maxCoeff() < 1e-12);
    const Vec X = pt({1, 2, 0, -1});
    const Vec Y = pt({0, 1, 1, 0});
    const Vec Z = pt({3, 0, 0, 1});
    CHECK(curv.apply(X, Y, Z).norm() < 1e-12);
}

TEST_CASE("riemann tensor has the curvature symmetries on the sphere")
{
    const auto S = models::sphere_stereo(3);
    const Point x = pt({0.2, 0.5, -0.4});
    const Riemann R = riemann(S, x, FdConfig{1e-4, true});
    const Mat g = metric_at(S, x);
    const Vec X = pt({1, 0.5, -0.2});
    const Vec Y = pt({-0.3, 1, 0.4});
    const Vec Z = pt({0.2, 0.1, 1});
    const Vec W = pt({0.7, -0.6, 0.3});
    CHECK((R.apply(X, Y, Z) + R.apply(Y, X, Z)).norm() < 1e-9);
    const Vec bianchi = R.apply(X, Y, Z) + R.apply(Y, Z, X) + R.apply(Z, X, Y);
    CHECK(bianchi.norm() < 1e-6);
    const double a = W.dot(g * R.apply(X, Y, Z));
    const double b = Z.dot(g * R.apply(X, Y, W));
    CHECK(std::abs(a + b) < 1e-6);
    // constant curvature 1: R(X,Y)Z = h(Y,Z)X - h(X,Z)Y
    const Vec ref = Y.dot(g * Z) * X - X.dot(g * Z) * Y;
    CHECK((R.apply(X, Y, Z) - ref).norm() < 1e-6);
}

TEST_CASE("ricci operator is self-adjoint for the metric")
{
    const auto M = models::exp_conformal(3);
    const Point x = pt({0.3, -0.2, 0.5});
    const Mat g = metric_at(M, x);
    const Mat ric = ricci_operator(M, x, FdConfig{1e-4, true});
    const Mat lowered = g * ric;
    CHECK((lowered - lowered.transpose()).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("laplacian agrees with the divergence form")
{
    const auto S = models::sphere_stereo(3);
    const auto poly = fields::Polynomial::random(3, 3, 1.0, 11);
    const auto f = poly.field();
    const Point x = pt({0.4, -0.1, 0.3});
    const double ref = oracle::laplacian(oracle::sphere_metric, f.eval, x);
    CHECK(laplacian_scalar(S, f, x, FdConfig{1e-4, true}) == doctest::Approx(ref).epsilon(1e-7));
    CHECK(laplacian_scalar(S, f.fd_only(), x, FdConfig{1e-4, true})
          == doctest::Approx(ref).epsilon(1e-6));
}

TEST_CASE("radial laplacian on R^n")
{
    for (int n : {2, 3, 5}) {
        const auto E = models::euclidean(n);
        Point x = Point::Zero(n);
        x[0] = 2.0;
        CHECK(laplacian_scalar(E, fields::radius(n), x, FdConfig{})
              == doctest::Approx(-(n - 1) / 2.0).epsilon(1e-10));
        CHECK(laplacian_scalar(E, fields::half_square_norm(n), x, FdConfig{})
              == doctest::Approx(-n).epsilon(1e-12));
    }
}

TEST_CASE("central differences converge at order two, Richardson at order four")
{
    const auto f = [](const Point& x) { return std::sin(x[0]) * std::exp(x[1]); };
    const Point x = pt({0.7, 0.2});
    const double exact = std::cos(0.7) * std::exp(0.2);
    auto err = [&](double h, bool r) {
        return std::abs(fd::partial(f, x, 0, FdConfig{h, r}) - exact);
    };
    CHECK(observed_order(err(1e-2, false), err(5e-3, false)) == doctest::Approx(2.0).epsilon(0.05));
    CHECK(observed_order(err(4e-2, true), err(2e-2, true)) == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("finite-difference stencils must stay in the domain")
{
    const auto H = models::half_space(3);
    const auto f = fields::log_x1(3).fd_only();
    CHECK_THROWS_AS(differential(H, f, pt({1e-5, 1, 1}), FdConfig{1e-4, false}), DomainError);
    CHECK_THROWS_AS(differential(H, f, pt({-1, 1, 1}), FdConfig{}), DomainError);
    CHECK_NOTHROW(differential(H, f, pt({0.5, 1, 1}), FdConfig{}));
}

TEST_CASE("singular or indefinite metrics are rejected")
{
    ChartManifold M;
    M.name = "degenerate";
    M.dim = 2;
    M.metric = [](const Point&) { return Mat(Mat::Ones(2, 2)); };
    CHECK_THROWS_AS(inverse_metric(M, pt({0, 0})), SingularMetricError);
    ChartManifold L = M;
    L.metric = [](const Point&) {
        Mat g = Mat::Identity(2, 2);
        g(1, 1) = -1.0;
        return g;
    };
    CHECK_THROWS_AS(metric_at(L, pt({0, 0})), SingularMetricError);
}

TEST_CASE("orthonormal frame is orthonormal")
{
    const auto S = models::sphere_stereo(4);
    const Point x = pt({0.3, 0.1, -0.7, 0.2});
    const Mat E = orthonormal_frame(S, x);
    const Mat gram = E.transpose() * metric_at(S, x) * E;
    CHECK((gram - Mat::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("covariant hessian of a sphere coordinate")
{
    // trace of the hessian reproduces the laplacian, both with the analytic jet
    const auto S = models::sphere_stereo(3);
    const auto f = fields::product_x1x2(3);
    const Point x = pt({0.5, 0.2, 0.1});
    FdConfig cfg{1e-4, true};
    CHECK(-trace_h(S, x, hessian(S, f, x, cfg)) == doctest::Approx(laplacian_scalar(S, f, x, cfg)));
}
