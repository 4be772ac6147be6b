#pragma once

/// Piecewise Hermite interpolation on strictly increasing nodes.

#include <vector>

namespace biharm {

/// C^1 cubic Hermite through (t_i, v_i) with prescribed slopes d_i.
class CubicHermite {
public:
    CubicHermite() = default;
    CubicHermite(std::vector<double> t, std::vector<double> v, std::vector<double> d);

    double operator()(double t) const { return eval(t, 0); }
    double derivative(double t) const { return eval(t, 1); }

    double front() const { return t_.front(); }
    double back() const { return t_.back(); }

private:
    double eval(double t, int order) const;

    std::vector<double> t_, v_, d_;
};

/// C^2 quintic Hermite through values, first and second derivatives.
class QuinticHermite {
public:
    QuinticHermite() = default;
    QuinticHermite(std::vector<double> t, std::vector<double> v, std::vector<double> d1,
                   std::vector<double> d2);

    /// order-th derivative, order in 0..3.
    double eval(double t, int order = 0) const;

    double front() const { return t_.front(); }
    double back() const { return t_.back(); }

private:
    std::vector<double> t_, v_, d1_, d2_;
};

/// Index i with t[i] <= x <= t[i+1]; throws DomainError outside [t.front(), t.back()].
std::size_t locate_interval(const std::vector<double>& t, double x);

} // namespace biharm
