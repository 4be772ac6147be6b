#include "biharm/fields.hpp"

#include <cmath>

namespace biharm::fields {

ScalarField constant(int n, double value)
{
    return ScalarField{[value](const Point&) { return value; },
                       [n](const Point&) { return Vec(Vec::Zero(n)); },
                       [n](const Point&) { return Mat(Mat::Zero(n, n)); }};
}

ScalarField linear(const Vec& coeffs)
{
    const auto n = coeffs.size();
    return ScalarField{[coeffs](const Point& x) { return coeffs.dot(x); },
                       [coeffs](const Point&) { return coeffs; },
                       [n](const Point&) { return Mat(Mat::Zero(n, n)); }};
}

ScalarField log_x1(int n, double p)
{
    return ScalarField{[p](const Point& x) { return p * std::log(x[0]); },
                       [n, p](const Point& x) {
                           Vec g = Vec::Zero(n);
                           g[0] = p / x[0];
                           return g;
                       },
                       [n, p](const Point& x) {
                           Mat H = Mat::Zero(n, n);
                           H(0, 0) = -p / (x[0] * x[0]);
                           return H;
                       }};
}

ScalarField radial_log(int n, double a)
{
    return ScalarField{[a](const Point& x) { return 0.5 * a * std::log(x.squaredNorm()); },
                       [a](const Point& x) { return Vec(a * x / x.squaredNorm()); },
                       [n, a](const Point& x) {
                           const double r2 = x.squaredNorm();
                           return Mat(a / r2 * Mat::Identity(n, n)
                                      - 2.0 * a / (r2 * r2) * x * x.transpose());
                       }};
}

ScalarField radius(int n)
{
    return ScalarField{[](const Point& x) { return x.norm(); },
                       [](const Point& x) { return Vec(x / x.norm()); },
                       [n](const Point& x) {
                           const double r = x.norm();
                           return Mat((Mat::Identity(n, n) - x * x.transpose() / (r * r)) / r);
                       }};
}

ScalarField product_x1x2(int n)
{
    return ScalarField{[](const Point& x) { return x[0] * x[1]; },
                       [n](const Point& x) {
                           Vec g = Vec::Zero(n);
                           g[0] = x[1];
                           g[1] = x[0];
                           return g;
                       },
                       [n](const Point&) {
                           Mat H = Mat::Zero(n, n);
                           H(0, 1) = H(1, 0) = 1.0;
                           return H;
                       }};
}

ScalarField exp_x1(int n)
{
    return ScalarField{[](const Point& x) { return std::exp(x[0]); },
                       [n](const Point& x) {
                           Vec g = Vec::Zero(n);
                           g[0] = std::exp(x[0]);
                           return g;
                       },
                       [n](const Point& x) {
                           Mat H = Mat::Zero(n, n);
                           H(0, 0) = std::exp(x[0]);
                           return H;
                       }};
}

ScalarField half_square_norm(int n)
{
    return ScalarField{[](const Point& x) { return 0.5 * x.squaredNorm(); },
                       [](const Point& x) { return Vec(x); },
                       [n](const Point&) { return Mat(Mat::Identity(n, n)); }};
}

Polynomial::Polynomial(int n, std::vector<Monomial> terms) : n_(n), terms_(std::move(terms))
{
    for (const auto& t : terms_) {
        if (static_cast<int>(t.powers.size()) != n_) {
            throw InvalidArgument("monomial arity does not match polynomial dimension");
        }
    }
}

namespace {

double power(double x, int p)
{
    double r = 1.0;
    for (int i = 0; i < p; ++i) {
        r *= x;
    }
    return r;
}

// Product of x_i^{p_i}, with the exponent of `d1` (and `d2`) lowered by
// differentiation; returns the accumulated falling-factorial factor.
double monomial_derivative(const Monomial& m, const Point& x, int d1, int d2)
{
    double v = m.coeff;
    for (int i = 0; i < static_cast<int>(m.powers.size()); ++i) {
        int p = m.powers[i];
        if (i == d1) {
            v *= p;
            --p;
        }
        if (i == d2) {
            v *= p;
            --p;
        }
        if (p < 0 || v == 0.0) {
            return 0.0;
        }
        v *= power(x[i], p);
    }
    return v;
}

} // namespace

double Polynomial::eval(const Point& x) const
{
    double s = 0.0;
    for (const auto& t : terms_) {
        s += monomial_derivative(t, x, -1, -1);
    }
    return s;
}

Vec Polynomial::gradient(const Point& x) const
{
    Vec g = Vec::Zero(n_);
    for (int i = 0; i < n_; ++i) {
        for (const auto& t : terms_) {
            g[i] += monomial_derivative(t, x, i, -1);
        }
    }
    return g;
}

Mat Polynomial::hessian(const Point& x) const
{
    Mat H = Mat::Zero(n_, n_);
    for (int i = 0; i < n_; ++i) {
        for (int j = i; j < n_; ++j) {
            double s = 0.0;
            for (const auto& t : terms_) {
                s += monomial_derivative(t, x, i, j);
            }
            H(i, j) = H(j, i) = s;
        }
    }
    return H;
}

ScalarField Polynomial::field() const
{
    Polynomial p = *this;
    return ScalarField{[p](const Point& x) { return p.eval(x); },
                       [p](const Point& x) { return p.gradient(x); },
                       [p](const Point& x) { return p.hessian(x); }};
}

Polynomial Polynomial::random(int n, int degree, double scale, std::uint64_t seed)
{
    UniformStream rng(seed);
    std::vector<Monomial> terms;
    std::vector<int> powers(n, 0);
    // Enumerate exponent vectors in lexicographic order.
    auto recurse = [&](auto&& self, int var, int remaining) -> void {
        if (var == n) {
            int total = 0;
            for (int p : powers) {
                total += p;
            }
            if (total >= 1) {
                terms.push_back(Monomial{rng.in(-scale, scale), powers});
            }
            return;
        }
        for (int p = 0; p <= remaining; ++p) {
            powers[var] = p;
            self(self, var + 1, remaining - p);
        }
        powers[var] = 0;
    };
    recurse(recurse, 0, degree);
    return Polynomial(n, std::move(terms));
}

} // namespace biharm::fields
