#pragma once

/// The reparametrization ODE
///   y'' - sigma y' + (4-n) y y' + (2c - sigma') y + 2 sigma y^2 + (2-n) y^3 = 0
/// for y = rho'(s), its RK4 integration, the closed-form ansatz families and
/// the reconstruction rho o s of the conformal exponent.

#include <functional>
#include <optional>
#include <vector>

#include "biharm/chart.hpp"
#include "biharm/interp.hpp"

namespace biharm {

/// Above this |y| the integration aborts.
inline constexpr double kBlowUpBound = 1e6;

struct OdeProblem {
    int n = 3;
    double c = 0.0;
    std::function<double(double)> sigma;
    std::function<double(double)> sigma_prime;
    double s0 = 1.0;
    double s1 = 2.0;
    double y0 = 0.0;
    double yp0 = 0.0;

    /// Throws InvalidArgument on an empty range, missing or non-finite sigma,
    /// or sigma' disagreeing with a finite difference of sigma beyond 1e-6.
    void validate() const;
};

struct OdeSolution {
    std::vector<double> s;
    std::vector<double> y;
    std::vector<double> yp;
    /// rho(s) = int_{s0}^{s} y, with rho(s0) = 0.
    std::vector<double> rho;
    /// max |y'' - rhs| on interior nodes, y'' and y' by central differences.
    double max_residual = 0.0;

    double y_end() const { return y.back(); }
    double rho_end() const { return rho.back(); }
};

/// y'' as a function of (s, y, y'). Throws DomainError outside [s0, s1].
double ode_rhs(const OdeProblem& p, double s, double y, double yp);

/// Classical RK4 on (y, y') with uniform steps no larger than `step`.
/// Throws InvalidArgument for n <= 2 or step <= 0 and BlowUpError when |y|
/// exceeds kBlowUpBound or a value turns non-finite.
OdeSolution integrate(const OdeProblem& p, double step);

struct AnsatzRoots {
    double A = 0.0, B = 0.0, C = 0.0;
    double discriminant = 0.0;
    /// Real roots in ascending order.
    std::vector<double> roots;
    /// Leading coefficient vanishes.
    bool degenerate_linear = false;
    /// Root a = 0 of a degenerate equation, dropped as the trivial solution.
    std::optional<double> excluded_trivial_root;

    double evaluate(double a) const { return (A * a + B) * a + C; }
};

/// y' = a y^2 in the flat case: 2a^2 + (4-n)a + (2-n) = 0.
AnsatzRoots ansatz_ex1(int n);

/// y = a/s with sigma = -(n-1)/s: (2-n)a^2 - (n+2)a + (4-2n) = 0.
AnsatzRoots ansatz_ex2(int n);

enum class AnsatzFamily { ex1, ex2 };

struct AnsatzValue {
    double y = 0.0;
    double yp = 0.0;
    double ypp = 0.0;
    double rho = 0.0;
};

/// ex1: y = -1/(a s), rho = -(1/a) ln s.  ex2: y = a/s, rho = a ln s.
/// Throws InvalidArgument for a = 0 and DomainError for s <= 0.
AnsatzValue ansatz_solution_field(double a, AnsatzFamily family, double s);

/// Flat problem sigma = 0, c = 0 started on the ex1 closed form with root a.
OdeProblem ex1_problem(int n, double a, double s0 = 1.0, double s1 = 2.0);

/// Radial problem sigma = -(n-1)/s, c = 0 started on the ex2 closed form.
OdeProblem ex2_problem(int n, double a, double s0 = 1.0, double s1 = 2.0);

/// Left side of the ODE for given (s, y, y', y'').
double ode_residual(const OdeProblem& p, double s, double y, double yp, double ypp);

/// Residual of the closed form y of `family` with root a, substituted into
/// the family's problem at s.
double ansatz_substitution_residual(int n, double a, AnsatzFamily family, double s);

/// rho o s with rho interpolated by quintic Hermite through (rho, y, y').
/// Analytic partials are supplied when s_field has them. Evaluation outside
/// the tabulated range throws DomainError.
ScalarField conformal_factor_from_solution(const OdeSolution& sol, const ScalarField& s_field);

} // namespace biharm
