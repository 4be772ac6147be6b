#pragma once

/// Central finite differences of order 2 with optional one-level Richardson
/// extrapolation. Works on any value type closed under +, - and scalar
/// multiplication (double, Eigen vectors and matrices).

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <type_traits>

#include "biharm/errors.hpp"

namespace biharm {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Chart coordinates of a point.
using Point = Eigen::VectorXd;

using DomainPredicate = std::function<bool(const Point&)>;

struct FdConfig {
    /// Base step. The actual step along axis i is h * max(1, |x_i|).
    double h = 1e-4;
    bool richardson = false;
};

namespace fd {

inline double step_along(const FdConfig& cfg, const Point& x, int i)
{
    return cfg.h * std::max(1.0, std::abs(x[i]));
}

namespace detail {

template <class T>
auto materialize(T&& v)
{
    if constexpr (std::is_arithmetic_v<std::decay_t<T>>) {
        return static_cast<double>(v);
    } else {
        return v.eval();
    }
}

inline std::string describe(const Point& x)
{
    std::ostringstream os;
    os << "(";
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        os << (i ? ", " : "") << x[i];
    }
    os << ")";
    return os.str();
}

} // namespace detail

/// Throws DomainError unless every point x +- s*e_i (i in axes, s the axis
/// step times `reach`) lies in the domain.
inline void check_stencil(const DomainPredicate& domain, const Point& x, const FdConfig& cfg,
                          double reach = 1.0)
{
    if (!domain) {
        return;
    }
    if (!domain(x)) {
        throw DomainError("point " + detail::describe(x) + " is outside the chart domain");
    }
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double s = reach * step_along(cfg, x, static_cast<int>(i));
        Point p = x;
        p[i] += s;
        Point m = x;
        m[i] -= s;
        if (!domain(p) || !domain(m)) {
            throw DomainError("finite-difference stencil around " + detail::describe(x)
                              + " leaves the chart domain");
        }
    }
}

/// d f / d x_i at x.
template <class F>
auto partial(const F& f, const Point& x, int i, const FdConfig& cfg)
{
    const double s = step_along(cfg, x, i);
    auto at = [&](double step) {
        Point p = x;
        p[i] += step;
        Point m = x;
        m[i] -= step;
        return detail::materialize((f(p) - f(m)) / (2.0 * step));
    };
    if (!cfg.richardson) {
        return at(s);
    }
    return detail::materialize((4.0 * at(0.5 * s) - at(s)) / 3.0);
}

/// d^2 f / dx_i dx_j at x.
template <class F>
auto second_partial(const F& f, const Point& x, int i, int j, const FdConfig& cfg)
{
    const double si = step_along(cfg, x, i);
    const double sj = step_along(cfg, x, j);
    auto at = [&](double scale) {
        const double a = scale * si;
        const double b = scale * sj;
        if (i == j) {
            Point p = x;
            p[i] += a;
            Point m = x;
            m[i] -= a;
            return detail::materialize((f(p) - 2.0 * f(x) + f(m)) / (a * a));
        }
        Point pp = x, pm = x, mp = x, mm = x;
        pp[i] += a; pp[j] += b;
        pm[i] += a; pm[j] -= b;
        mp[i] -= a; mp[j] += b;
        mm[i] -= a; mm[j] -= b;
        return detail::materialize((f(pp) - f(pm) - f(mp) + f(mm)) / (4.0 * a * b));
    };
    if (!cfg.richardson) {
        return at(1.0);
    }
    return detail::materialize((4.0 * at(0.5) - at(1.0)) / 3.0);
}

/// Gradient of a scalar function in coordinates (partials, not raised).
template <class F>
Vec partials(const F& f, const Point& x, const FdConfig& cfg)
{
    Vec g(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        g[i] = partial(f, x, static_cast<int>(i), cfg);
    }
    return g;
}

/// Matrix of second partials of a scalar function.
template <class F>
Mat second_partials(const F& f, const Point& x, const FdConfig& cfg)
{
    const auto n = x.size();
    Mat H(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i; j < n; ++j) {
            H(i, j) = second_partial(f, x, static_cast<int>(i), static_cast<int>(j), cfg);
            H(j, i) = H(i, j);
        }
    }
    return H;
}

/// Jacobian J(k, i) = d f^k / d x_i of a vector-valued function.
template <class F>
Mat jacobian(const F& f, const Point& x, const FdConfig& cfg)
{
    const auto n = x.size();
    Mat J;
    for (Eigen::Index i = 0; i < n; ++i) {
        Vec col = partial(f, x, static_cast<int>(i), cfg);
        if (i == 0) {
            J.resize(col.size(), n);
        }
        J.col(i) = col;
    }
    return J;
}

} // namespace fd
} // namespace biharm
