#include "biharm/reparam_ode.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "biharm/errors.hpp"

namespace biharm {

void OdeProblem::validate() const
{
    if (!(s1 > s0)) {
        throw InvalidArgument("ODE range needs s0 < s1");
    }
    if (!sigma || !sigma_prime) {
        throw InvalidArgument("ODE problem needs sigma and sigma'");
    }
    if (!std::isfinite(c) || !std::isfinite(y0) || !std::isfinite(yp0)) {
        throw InvalidArgument("ODE problem has non-finite data");
    }
    const int samples = 17;
    const double len = s1 - s0;
    const double d = 1e-5 * std::max(1.0, std::max(std::abs(s0), std::abs(s1)));
    for (int k = 0; k < samples; ++k) {
        const double s = s0 + len * k / (samples - 1);
        const double v = sigma(s), dv = sigma_prime(s);
        if (!std::isfinite(v) || !std::isfinite(dv)) {
            throw InvalidArgument("sigma or sigma' not finite at s = " + std::to_string(s));
        }
        if (len < 4.0 * d) {
            continue;
        }
        const double mid = std::clamp(s, s0 + d, s1 - d);
        const double fd = (sigma(mid + d) - sigma(mid - d)) / (2.0 * d);
        const double exact = sigma_prime(mid);
        if (std::abs(fd - exact) > 1e-6 * std::max(1.0, std::abs(exact))) {
            throw InvalidArgument("sigma' disagrees with the derivative of sigma at s = "
                                  + std::to_string(s));
        }
    }
}

namespace {

void check_range(const OdeProblem& p, double s)
{
    const double slack = 1e-12 * std::max(1.0, p.s1 - p.s0);
    if (!(s >= p.s0 - slack && s <= p.s1 + slack)) {
        throw DomainError("s = " + std::to_string(s) + " outside the ODE range ["
                          + std::to_string(p.s0) + ", " + std::to_string(p.s1) + "]");
    }
}

} // namespace

double ode_rhs(const OdeProblem& p, double s, double y, double yp)
{
    check_range(p, s);
    const double n = p.n;
    const double sig = p.sigma(s);
    return sig * yp - (4.0 - n) * y * yp - (2.0 * p.c - p.sigma_prime(s)) * y
           - 2.0 * sig * y * y - (2.0 - n) * y * y * y;
}

double ode_residual(const OdeProblem& p, double s, double y, double yp, double ypp)
{
    return ypp - ode_rhs(p, s, y, yp);
}

OdeSolution integrate(const OdeProblem& p, double step)
{
    if (p.n <= 2) {
        throw InvalidArgument("integration requires n > 2");
    }
    if (!(step > 0.0)) {
        throw InvalidArgument("integration step must be positive");
    }
    p.validate();

    const double len = p.s1 - p.s0;
    const int steps = std::max(1, static_cast<int>(std::ceil(len / step - 1e-9)));
    const double h = len / steps;

    OdeSolution sol;
    sol.s.reserve(steps + 1);
    sol.y.reserve(steps + 1);
    sol.yp.reserve(steps + 1);
    sol.rho.reserve(steps + 1);

    double y = p.y0, yp = p.yp0, rho = 0.0;
    auto push = [&](double s) {
        if (!std::isfinite(y) || !std::isfinite(yp)) {
            throw BlowUpError("non-finite solution at s = " + std::to_string(s));
        }
        if (std::abs(y) > kBlowUpBound) {
            throw BlowUpError("|y| exceeded " + std::to_string(kBlowUpBound) + " at s = "
                              + std::to_string(s));
        }
        sol.s.push_back(s);
        sol.y.push_back(y);
        sol.yp.push_back(yp);
        sol.rho.push_back(rho);
    };
    push(p.s0);

    for (int k = 0; k < steps; ++k) {
        const double s = p.s0 + k * h;
        const double s_next = k + 1 == steps ? p.s1 : p.s0 + (k + 1) * h;
        const double hm = s_next - s;
        const double k1y = yp, k1v = ode_rhs(p, s, y, yp);
        const double k2y = yp + 0.5 * hm * k1v;
        const double k2v = ode_rhs(p, s + 0.5 * hm, y + 0.5 * hm * k1y, k2y);
        const double k3y = yp + 0.5 * hm * k2v;
        const double k3v = ode_rhs(p, s + 0.5 * hm, y + 0.5 * hm * k2y, k3y);
        const double k4y = yp + hm * k3v;
        const double k4v = ode_rhs(p, s_next, y + hm * k3y, k4y);
        const double y_old = y, yp_old = yp;
        y += hm / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
        yp += hm / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        // Trapezoid with the endpoint derivative correction.
        rho += 0.5 * hm * (y_old + y) - hm * hm / 12.0 * (yp - yp_old);
        push(s_next);
    }

    for (int k = 1; k < steps; ++k) {
        const double ypp = (sol.y[k + 1] - 2.0 * sol.y[k] + sol.y[k - 1]) / (h * h);
        const double yp_fd = (sol.y[k + 1] - sol.y[k - 1]) / (2.0 * h);
        sol.max_residual =
            std::max(sol.max_residual, std::abs(ode_residual(p, sol.s[k], sol.y[k], yp_fd, ypp)));
    }
    return sol;
}

namespace {

void solve_quadratic(AnsatzRoots& r)
{
    r.discriminant = r.B * r.B - 4.0 * r.A * r.C;
    if (r.A == 0.0) {
        r.degenerate_linear = true;
        if (r.B != 0.0) {
            const double a = -r.C / r.B;
            if (a == 0.0) {
                r.excluded_trivial_root = 0.0;
            } else {
                r.roots.push_back(a);
            }
        }
        return;
    }
    if (r.discriminant < 0.0) {
        return;
    }
    if (r.discriminant == 0.0) {
        r.roots.push_back(-r.B / (2.0 * r.A));
        return;
    }
    const double sq = std::sqrt(r.discriminant);
    const double q = -0.5 * (r.B + std::copysign(sq, r.B));
    r.roots.push_back(q / r.A);
    r.roots.push_back(r.C / q);
    std::sort(r.roots.begin(), r.roots.end());
}

} // namespace

AnsatzRoots ansatz_ex1(int n)
{
    AnsatzRoots r;
    r.A = 2.0;
    r.B = 4.0 - n;
    r.C = 2.0 - n;
    solve_quadratic(r);
    return r;
}

AnsatzRoots ansatz_ex2(int n)
{
    AnsatzRoots r;
    r.A = 2.0 - n;
    r.B = -(n + 2.0);
    r.C = 4.0 - 2.0 * n;
    solve_quadratic(r);
    return r;
}

AnsatzValue ansatz_solution_field(double a, AnsatzFamily family, double s)
{
    if (a == 0.0) {
        throw InvalidArgument("ansatz root a = 0 gives the trivial solution");
    }
    if (!(s > 0.0)) {
        throw DomainError("ansatz solutions need s > 0, got s = " + std::to_string(s));
    }
    AnsatzValue v;
    if (family == AnsatzFamily::ex1) {
        v.y = -1.0 / (a * s);
        v.yp = 1.0 / (a * s * s);
        v.ypp = -2.0 / (a * s * s * s);
        v.rho = -std::log(s) / a;
    } else {
        v.y = a / s;
        v.yp = -a / (s * s);
        v.ypp = 2.0 * a / (s * s * s);
        v.rho = a * std::log(s);
    }
    return v;
}

OdeProblem ex1_problem(int n, double a, double s0, double s1)
{
    OdeProblem p;
    p.n = n;
    p.c = 0.0;
    p.sigma = [](double) { return 0.0; };
    p.sigma_prime = [](double) { return 0.0; };
    p.s0 = s0;
    p.s1 = s1;
    const AnsatzValue v = ansatz_solution_field(a, AnsatzFamily::ex1, s0);
    p.y0 = v.y;
    p.yp0 = v.yp;
    return p;
}

OdeProblem ex2_problem(int n, double a, double s0, double s1)
{
    OdeProblem p;
    p.n = n;
    p.c = 0.0;
    const double k = n - 1.0;
    p.sigma = [k](double s) { return -k / s; };
    p.sigma_prime = [k](double s) { return k / (s * s); };
    p.s0 = s0;
    p.s1 = s1;
    const AnsatzValue v = ansatz_solution_field(a, AnsatzFamily::ex2, s0);
    p.y0 = v.y;
    p.yp0 = v.yp;
    return p;
}

double ansatz_substitution_residual(int n, double a, AnsatzFamily family, double s)
{
    const OdeProblem p = family == AnsatzFamily::ex1 ? ex1_problem(n, a, s, s + 1.0)
                                                     : ex2_problem(n, a, s, s + 1.0);
    const AnsatzValue v = ansatz_solution_field(a, family, s);
    return ode_residual(p, s, v.y, v.yp, v.ypp);
}

ScalarField conformal_factor_from_solution(const OdeSolution& sol, const ScalarField& s_field)
{
    const QuinticHermite table(sol.s, sol.rho, sol.y, sol.yp);
    ScalarField out;
    out.eval = [table, s_field](const Point& x) { return table.eval(s_field(x), 0); };
    if (s_field.analytic_grad) {
        out.analytic_grad = [table, s_field](const Point& x) {
            return Vec(table.eval(s_field(x), 1) * s_field.analytic_grad(x));
        };
        if (s_field.analytic_hessian) {
            out.analytic_hessian = [table, s_field](const Point& x) {
                const double s = s_field(x);
                const Vec ds = s_field.analytic_grad(x);
                return Mat(table.eval(s, 2) * ds * ds.transpose()
                           + table.eval(s, 1) * s_field.analytic_hessian(x));
            };
        }
    }
    return out;
}

} // namespace biharm
