#include "doctest.h"

#include "biharm/fields.hpp"
#include "biharm/isoparametric.hpp"
#include "biharm/models.hpp"
#include "biharm/residual.hpp"

#include <cmath>

using namespace biharm;

namespace {

const FdConfig kExact{1e-4, true};

std::vector<Point> cube(int n, double lo, double hi, int res)
{
    return grid_points(GridSpec{Vec::Constant(n, lo), Vec::Constant(n, hi), res, {}, {}});
}

} // namespace

TEST_CASE("linear and radial functions are isoparametric under both criteria")
{
    const auto E = models::euclidean(3);
    const auto pts = cube(3, 0.5, 2.0, 4);
    for (const auto& f : {fields::linear((Vec(3) << 1, -2, 0.5).finished()), fields::radius(3)}) {
        const auto c = collinearity_check(E, f, pts, 1e-8, kExact);
        CHECK(c.gradient_norm.verdict);
        CHECK(c.laplacian.verdict);
        CHECK(c.gradient_norm.max_defect <= 1e-8);
        CHECK(c.laplacian.max_defect <= 1e-8);
        const auto d = dependence_fit(E, f, pts, 1e-8, kExact);
        CHECK(d.verdict());
        CHECK_FALSE(d.gradient_norm.inconclusive);
    }
}

TEST_CASE("x1 x2 is not isoparametric")
{
    const auto E = models::euclidean(3);
    const auto pts = cube(3, 0.5, 2.0, 4);
    const auto f = fields::product_x1x2(3);
    const auto c = collinearity_check(E, f, pts, 1e-8, kExact);
    CHECK_FALSE(c.gradient_norm.verdict);
    CHECK(c.gradient_norm.max_defect >= 0.1);
    // Delta f = 0, so criterion (ii) alone cannot see it
    CHECK(c.laplacian.max_defect < 1e-8);
    const auto d = dependence_fit(E, f, pts, 1e-8, kExact);
    CHECK_FALSE(d.gradient_norm.verdict);
    CHECK(d.gradient_norm.max_defect >= 0.1);

    // f = 1 at (1,1) and (0.5,2), with |df|^2 = 2 and 4.25
    const std::vector<Point> same_level{(Point(3) << 1, 1, 0).finished(),
                                        (Point(3) << 0.5, 2, 0).finished()};
    const auto two = dependence_fit(E, f, same_level, 1e-8, kExact);
    REQUIRE(two.gradient_norm.profile.size() == 1);
    CHECK(two.gradient_norm.profile[0].spread == doctest::Approx(2.25).epsilon(1e-6));
}

TEST_CASE("critical points are skipped, all-critical samples are an error")
{
    const auto E = models::euclidean(3);
    const auto f = fields::half_square_norm(3);
    const auto c = collinearity_check(E, f, {Point::Zero(3), Point::Ones(3)}, 1e-8, kExact);
    CHECK(c.skipped_critical.size() == 1);
    CHECK(c.gradient_norm.defects.size() == 1);
    CHECK_THROWS_AS(collinearity_check(E, f, {Point::Zero(3)}, 1e-8, kExact), InvalidArgument);
}

TEST_CASE("arclength reparametrization")
{
    const auto s = arclength_reparam([](double t) { return t * t; }, 1.0, 2.0);
    CHECK(s(2.0) == doctest::Approx(std::log(2.0)).epsilon(1e-10));
    CHECK(s(1.0) == 0.0);
    CHECK(s.derivative(1.5) == doctest::Approx(1.0 / 1.5));
    CHECK_THROWS_AS(arclength_reparam([](double t) { return t - 1.5; }, 1.0, 2.0),
                    InvalidArgument);

    // |d(|x|^2/2)|^2 = 2t, so s = sqrt(2t) = |x| has unit speed
    const auto E = models::euclidean(3);
    const auto half = ArclengthMap([](double t) { return 2.0 * t; }, 0.1, 3.0, 400, std::sqrt(0.2));
    const auto composed = half.compose(fields::half_square_norm(3));
    const auto pts = cube(3, 0.5, 1.2, 3);
    CHECK(unit_speed_defect(E, composed, pts, FdConfig{}) < 1e-6);
    const Point x = (Point(3) << 0.5, 0.6, 0.7).finished();
    CHECK(composed(x) == doctest::Approx(x.norm()).epsilon(1e-8));
}

TEST_CASE("F coefficient for log rho")
{
    const ConformalChange cc{models::half_space(3), fields::log_x1(3)};
    // |d rho|^2 = e^{-2 rho}
    const auto gp = [](double r) { return -2.0 * std::exp(-2.0 * r); };
    const auto L = lemma_F(cc, gp, 0.0, Point::Ones(3), kExact);
    CHECK(L.F == doctest::Approx(-2.0).epsilon(1e-6));
    CHECK(L.defect < 1e-6);
    CHECK((L.laplace_alpha.comp - L.F * L.alpha.comp).norm() < 1e-6);
}

TEST_CASE("level profile of the radius")
{
    const auto E = models::euclidean(3);
    const Point seed = (Point(3) << 1, 0, 0).finished();
    const auto P = sample_level_profile(E, fields::radius(3), seed, 2.0, 11, kExact);
    REQUIRE(P.s.size() == 11);
    CHECK(P.einstein_c == 0.0);
    for (std::size_t k = 0; k < P.s.size(); ++k) {
        CHECK(P.gamma[k] == doctest::Approx(1.0).epsilon(1e-8));
        CHECK(P.sigma[k] == doctest::Approx(-2.0 / P.s[k]).epsilon(1e-6));
        CHECK(P.sigma_prime[k] == doctest::Approx(2.0 / (P.s[k] * P.s[k])).epsilon(1e-5));
    }
    CHECK(P.sigma_at(1.25) == doctest::Approx(-1.6).epsilon(1e-4));
    CHECK_THROWS_AS(sample_level_profile(models::exp_conformal(3), fields::radius(3), seed, 2.0, 5,
                                         kExact),
                    InvalidArgument);
}
