#include "biharm/interp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "biharm/errors.hpp"

namespace biharm {

namespace {

void check_nodes(const std::vector<double>& t, std::size_t other)
{
    if (t.size() < 2 || other != t.size()) {
        throw InvalidArgument("interpolation needs at least two nodes with matching data");
    }
    for (std::size_t i = 1; i < t.size(); ++i) {
        if (!(t[i] > t[i - 1])) {
            throw InvalidArgument("interpolation nodes must be strictly increasing");
        }
    }
}

} // namespace

std::size_t locate_interval(const std::vector<double>& t, double x)
{
    const double slack = 1e-12 * std::max(1.0, std::abs(t.back() - t.front()));
    if (!(x >= t.front() - slack && x <= t.back() + slack)) {
        throw DomainError("value " + std::to_string(x) + " outside tabulated range ["
                          + std::to_string(t.front()) + ", " + std::to_string(t.back()) + "]");
    }
    auto it = std::upper_bound(t.begin(), t.end(), x);
    std::size_t i = it == t.begin() ? 0 : static_cast<std::size_t>(it - t.begin()) - 1;
    return std::min(i, t.size() - 2);
}

CubicHermite::CubicHermite(std::vector<double> t, std::vector<double> v, std::vector<double> d)
    : t_(std::move(t)), v_(std::move(v)), d_(std::move(d))
{
    check_nodes(t_, v_.size());
    check_nodes(t_, d_.size());
}

double CubicHermite::eval(double t, int order) const
{
    const std::size_t i = locate_interval(t_, t);
    const double h = t_[i + 1] - t_[i];
    const double u = (t - t_[i]) / h;
    const double p0 = v_[i], p1 = v_[i + 1];
    const double m0 = d_[i] * h, m1 = d_[i + 1] * h;
    if (order == 0) {
        const double h00 = (1 + 2 * u) * (1 - u) * (1 - u);
        const double h10 = u * (1 - u) * (1 - u);
        const double h01 = u * u * (3 - 2 * u);
        const double h11 = u * u * (u - 1);
        return h00 * p0 + h10 * m0 + h01 * p1 + h11 * m1;
    }
    const double d00 = 6 * u * u - 6 * u;
    const double d10 = 3 * u * u - 4 * u + 1;
    const double d01 = -6 * u * u + 6 * u;
    const double d11 = 3 * u * u - 2 * u;
    return (d00 * p0 + d10 * m0 + d01 * p1 + d11 * m1) / h;
}

QuinticHermite::QuinticHermite(std::vector<double> t, std::vector<double> v,
                               std::vector<double> d1, std::vector<double> d2)
    : t_(std::move(t)), v_(std::move(v)), d1_(std::move(d1)), d2_(std::move(d2))
{
    check_nodes(t_, v_.size());
    check_nodes(t_, d1_.size());
    check_nodes(t_, d2_.size());
}

double QuinticHermite::eval(double t, int order) const
{
    if (order < 0 || order > 3) {
        throw InvalidArgument("QuinticHermite supports derivative orders 0..3");
    }
    const std::size_t i = locate_interval(t_, t);
    const double h = t_[i + 1] - t_[i];
    const double u = (t - t_[i]) / h;

    // Coefficients of p(u) = sum c_k u^k matching (v, h d1, h^2 d2) at u = 0, 1.
    const double a0 = v_[i], a1 = d1_[i] * h, a2 = 0.5 * d2_[i] * h * h;
    const double b0 = v_[i + 1], b1 = d1_[i + 1] * h, b2 = 0.5 * d2_[i + 1] * h * h;
    const double r0 = b0 - a0 - a1 - a2;
    const double r1 = b1 - a1 - 2 * a2;
    const double r2 = b2 - a2;
    const double c3 = 10 * r0 - 4 * r1 + r2;
    const double c4 = -15 * r0 + 7 * r1 - 2 * r2;
    const double c5 = 6 * r0 - 3 * r1 + r2;
    const double c[6] = {a0, a1, a2, c3, c4, c5};

    double value = 0.0;
    for (int k = 5; k >= order; --k) {
        double coeff = c[k];
        for (int m = 0; m < order; ++m) {
            coeff *= (k - m);
        }
        value = value * u + coeff;
    }
    return value / std::pow(h, order);
}

} // namespace biharm
