#include "doctest.h"

#include "biharm/conformal.hpp"
#include "biharm/fields.hpp"
#include "biharm/models.hpp"
#include "oracles.hpp"

using namespace biharm;

namespace {

Vec e1(int n, double scale = 1.0)
{
    return scale * Vec::Unit(n, 0);
}

const FdConfig kExact{1e-4, true};

} // namespace

TEST_CASE("linear rho on R^3 at the origin")
{
    const ConformalChange cc{models::euclidean(3), fields::linear(e1(3))};
    const Point o = Point::Zero(3);
    CHECK((tension_forward(cc, o, kExact) - e1(3, -1.0)).norm() < 1e-12);
    CHECK((tension_reverse(cc, o, kExact) - e1(3, 1.0)).norm() < 1e-12);
    CHECK((bitension_forward(cc, o, kExact) - e1(3, 1.0)).norm() < 1e-8);
    CHECK((bitension_reverse(cc, o, kExact) - e1(3, 2.0)).norm() < 1e-8);
    const auto d = defect_identity(cc, o, kExact);
    CHECK((d.lhs - e1(3, 3.0)).norm() < 1e-8);
    CHECK((d.rhs - e1(3, 3.0)).norm() < 1e-8);
}

TEST_CASE("log rho on the half space")
{
    const ConformalChange cc5{models::half_space(5), fields::log_x1(5)};
    const Point ones = Point::Ones(5);
    CHECK(bitension_forward(cc5, ones, kExact).norm() < 1e-8);
    CHECK((bitension_reverse(cc5, ones, kExact) - e1(5, 9.0)).norm() < 1e-8);

    const ConformalChange cc3{models::half_space(3), fields::log_x1(3)};
    const auto t = bigrad_terms(cc3, Point::Ones(3), kExact);
    CHECK((t.grad_of_grad_sq - e1(3, -2.0)).norm() < 1e-10);
    CHECK((t.grad_rho_sq * t.grad_rho - e1(3, 1.0)).norm() < 1e-10);
    CHECK(t.laplacian_rho == doctest::Approx(1.0));
}

TEST_CASE("tension matches a trace of connection differences")
{
    const auto S = models::sphere_stereo(3);
    const auto rho = fields::Polynomial::random(3, 2, 0.5, 3).field();
    const ConformalChange cc{S, rho};
    const Point x = (Point(3) << 0.3, -0.4, 0.2).finished();

    const Mat g = oracle::sphere_metric(x);
    const auto G = oracle::christoffel(oracle::sphere_metric, x);
    Vec drho(3);
    for (int i = 0; i < 3; ++i) {
        drho[i] = oracle::d1(rho.eval, x, i);
    }
    const auto Gt = oracle::conformal_christoffel(G, g, drho);
    const Mat ginv = g.inverse();
    Vec ref = Vec::Zero(3);
    for (int k = 0; k < 3; ++k) {
        ref[k] = (ginv.cwiseProduct(Gt[k] - G[k])).sum();
    }
    CHECK((tension_forward(cc, x, kExact) - ref).norm() < 1e-8);
    CHECK((identity_tension_fd(S, conformal_metric_manifold(cc), x, kExact) - ref).norm() < 1e-6);
}

TEST_CASE("assembled bitension agrees with the definitional oracle")
{
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const auto rho = fields::Polynomial::random(3, 3, 0.3, seed).field();
        const ConformalChange cc{models::euclidean(3), rho};
        const Point x = (Point(3) << 0.2, -0.1, 0.3).finished();
        const Vec a = bitension_forward(cc, x, kExact);
        const Vec b = bitension_oracle_fd(cc, x, FdConfig{1e-3, true});
        CHECK((a - b).norm() < 1e-4 * std::max(1.0, a.norm()));
    }
}

TEST_CASE("defect identity holds for random polynomial rho")
{
    for (int n : {3, 5}) {
        for (std::uint64_t seed = 10; seed < 13; ++seed) {
            const auto rho = fields::Polynomial::random(n, 3, 0.3, seed).field();
            const ConformalChange cc{models::euclidean(n), rho};
            Point x = Point::Constant(n, 0.1);
            const auto d = defect_identity(cc, x, kExact);
            CHECK((d.lhs - d.rhs).norm() < 1e-7 * std::max(1.0, d.rhs.norm()));
        }
    }
}

TEST_CASE("forward bitension is (2-n) times the bigradient residual")
{
    const auto rho = fields::Polynomial::random(4, 3, 0.5, 7).field();
    const ConformalChange cc{models::sphere_stereo(4), rho};
    const Point x = Point::Constant(4, 0.2);
    const auto t = bigrad_terms(cc, x, kExact);
    CHECK((bitension_forward_from_terms(t) + 2.0 * bigrad_from_terms(t)).norm() < 1e-10);
    const auto parts = bitension_forward_parts(t);
    CHECK((parts.minus_laplacian_tau - parts.curvature_trace - parts.total).norm() < 1e-10);
}

TEST_CASE("constant rho changes nothing")
{
    const ConformalChange cc{models::sphere_stereo(3), fields::constant(3, 0.7)};
    const Point x = Point::Constant(3, 0.4);
    CHECK(tension_forward(cc, x, kExact).norm() == 0.0);
    CHECK(bitension_forward(cc, x, kExact).norm() < 1e-12);
    CHECK(bitension_reverse(cc, x, kExact).norm() < 1e-12);
}

TEST_CASE("conformal curvature of the flat metric e^{2x1} delta")
{
    // R~ from the change formula against the Riemann tensor of the changed chart
    const ConformalChange cc{models::euclidean(3), fields::linear(e1(3))};
    const auto M = models::exp_conformal(3);
    const Point x = (Point(3) << 0.1, 0.2, -0.3).finished();
    const Riemann R = riemann(M, x, kExact);
    const Vec X = (Vec(3) << 1, 0.2, 0).finished();
    const Vec Y = (Vec(3) << 0, 1, -0.5).finished();
    const Vec Z = (Vec(3) << 0.3, 0, 1).finished();
    CHECK((conformal_curvature(cc, X, Y, Z, x, kExact) - R.apply(X, Y, Z)).norm() < 1e-6);
}

TEST_CASE("identity tension formulas need n > 2")
{
    const ConformalChange cc{models::euclidean(2), fields::linear(e1(2))};
    CHECK_THROWS_AS(tension_forward(cc, Point::Zero(2), kExact), DimensionError);
    CHECK_THROWS_AS(bitension_forward(cc, Point::Zero(2), kExact), DimensionError);
}
