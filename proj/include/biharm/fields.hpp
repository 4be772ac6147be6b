#pragma once

/// Scalar field presets with analytic first and second partials.

#include <cstdint>
#include <random>
#include <vector>

#include "biharm/chart.hpp"

namespace biharm::fields {

ScalarField constant(int n, double value);

/// sum_i c_i x^i.
ScalarField linear(const Vec& coeffs);

/// p * ln x^1 (p = 1 is the ln_x1 preset; e^{2 rho} = (x^1)^{2p}).
ScalarField log_x1(int n, double p = 1.0);

/// a * ln |x|.
ScalarField radial_log(int n, double a);

/// |x|.
ScalarField radius(int n);

/// x^1 x^2.
ScalarField product_x1x2(int n);

/// e^{x^1}.
ScalarField exp_x1(int n);

/// |x|^2 / 2.
ScalarField half_square_norm(int n);

struct Monomial {
    double coeff = 0.0;
    std::vector<int> powers;
};

/// A multivariate polynomial with exact derivatives.
class Polynomial {
public:
    Polynomial(int n, std::vector<Monomial> terms);

    int dim() const { return n_; }
    const std::vector<Monomial>& terms() const { return terms_; }

    double eval(const Point& x) const;
    Vec gradient(const Point& x) const;
    Mat hessian(const Point& x) const;

    ScalarField field() const;

    /// All monomials of total degree 1..degree with coefficients drawn
    /// uniformly from [-scale, scale]. Deterministic for a given seed.
    static Polynomial random(int n, int degree, double scale, std::uint64_t seed);

private:
    int n_;
    std::vector<Monomial> terms_;
};

/// Uniform doubles in [0, 1) from std::mt19937_64. The engine output is
/// fixed by the standard; std distributions are not, so the conversion is
/// done here to keep seeded runs identical across standard libraries.
class UniformStream {
public:
    explicit UniformStream(std::uint64_t seed) : engine_(seed) {}
    double next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double in(double lo, double hi) { return lo + (hi - lo) * next(); }

private:
    std::mt19937_64 engine_;
};

} // namespace biharm::fields
