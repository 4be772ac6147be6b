#include "biharm/conformal.hpp"

#include <cmath>

namespace biharm {

namespace {

void require_tension_dimension(const ConformalChange& cc)
{
    if (cc.n() <= 2) {
        throw DimensionError("tension and bitension of the identity need n > 2, got n = "
                             + std::to_string(cc.n()));
    }
}

} // namespace

ChartManifold conformal_metric_manifold(const ConformalChange& cc)
{
    ChartManifold M;
    M.name = "e^{2rho}(" + cc.base.name + ")";
    M.dim = cc.base.dim;
    M.domain = cc.base.domain;
    const ChartManifold base = cc.base;
    const auto rho = cc.rho.eval;
    M.metric = [base, rho](const Point& x) {
        return Mat(std::exp(2.0 * rho(x)) * base.metric(x));
    };
    return M;
}

VectorField grad_rho_field(const ConformalChange& cc, const FdConfig& cfg)
{
    return grad_field(cc.base, cc.rho, cfg);
}

Vec p_tensor(const ConformalChange& cc, const Vec& X, const Vec& Y, const Point& x,
             const FdConfig& cfg)
{
    const Vec drho = differential(cc.base, cc.rho, x, cfg);
    const Vec g = inverse_metric(cc.base, x) * drho;
    return drho.dot(X) * Y + drho.dot(Y) * X - inner(cc.base, x, X, Y) * g;
}

Vec conformal_connection(const ConformalChange& cc, const VectorField& X, const Vec& Y,
                         const Point& x, const FdConfig& cfg)
{
    return covariant_derivative_vec(cc.base, X, Y, x, cfg) + p_tensor(cc, Y, X.value(x), x, cfg);
}

Vec nabla_p_antisymmetrized(const ConformalChange& cc, const Vec& X, const Vec& Y, const Vec& Z,
                            const Point& x, const FdConfig& cfg)
{
    const Mat D = covariant_jacobian(cc.base, grad_rho_field(cc, cfg), x, cfg);
    const Vec nX = D * X;
    const Vec nY = D * Y;
    const Mat h = metric_at(cc.base, x);
    const Vec hZ = h * Z;
    return -hZ.dot(nY) * X + hZ.dot(nX) * Y - Y.dot(hZ) * nX + X.dot(hZ) * nY;
}

Vec conformal_curvature(const ConformalChange& cc, const Vec& X, const Vec& Y, const Vec& Z,
                        const Point& x, const FdConfig& cfg)
{
    const Riemann R = riemann(cc.base, x, cfg);
    auto P = [&](const Vec& A, const Vec& B) { return p_tensor(cc, A, B, x, cfg); };
    return R.apply(X, Y, Z) + nabla_p_antisymmetrized(cc, X, Y, Z, x, cfg) + P(X, P(Y, Z))
           - P(Y, P(X, Z));
}

Vec tension_forward(const ConformalChange& cc, const Point& x, const FdConfig& cfg)
{
    require_tension_dimension(cc);
    return (2.0 - cc.n()) * grad(cc.base, cc.rho, x, cfg);
}

Vec tension_reverse(const ConformalChange& cc, const Point& x, const FdConfig& cfg)
{
    require_tension_dimension(cc);
    return -std::exp(-2.0 * cc.rho(x)) * (2.0 - cc.n()) * grad(cc.base, cc.rho, x, cfg);
}

BigradTerms bigrad_terms(const ConformalChange& cc, const Point& x, const FdConfig& cfg)
{
    require_tension_dimension(cc);
    const ChartManifold& M = cc.base;
    BigradTerms t;
    t.n = cc.n();
    t.rho = cc.rho(x);
    const VectorField G = grad_rho_field(cc, cfg);
    t.grad_rho = G.value(x);
    t.grad_rho_sq = inner(M, x, t.grad_rho, t.grad_rho);
    t.laplacian_rho = laplacian_scalar(M, cc.rho, x, cfg);
    t.trace_hessian_grad = rough_laplacian_vec(M, G, x, cfg);
    t.nabla_grad_grad = covariant_jacobian(M, G, x, cfg) * t.grad_rho;

    // d_k |grad rho|^2 = 2 (nabla^2 rho)_kj (grad rho)^j when the Hessian is exact;
    // otherwise differentiate the scalar |grad rho|^2 numerically.
    const Mat hinv = inverse_metric(M, x);
    if (cc.rho.analytic_hessian) {
        t.grad_of_grad_sq = hinv * (2.0 * hessian(M, cc.rho, x, cfg) * t.grad_rho);
    } else {
        ScalarField sq{[M, G](const Point& y) {
                           const Vec g = G.value(y);
                           return inner(M, y, g, g);
                       },
                       {},
                       {}};
        t.grad_of_grad_sq = grad(M, sq, x, cfg);
    }
    t.ricci_grad = ricci_operator(M, x, cfg) * t.grad_rho;
    return t;
}

Vec bigrad_from_terms(const BigradTerms& t)
{
    const double n = t.n;
    return t.trace_hessian_grad
           + (2.0 * t.laplacian_rho + (2.0 - n) * t.grad_rho_sq) * t.grad_rho
           + 0.5 * (6.0 - n) * t.grad_of_grad_sq + t.ricci_grad;
}

Vec bigrad_residual(const ConformalChange& cc, const Point& x, const FdConfig& cfg)
{
    return bigrad_from_terms(bigrad_terms(cc, x, cfg));
}

BitensionParts bitension_forward_parts(const BigradTerms& t)
{
    const double k = 2.0 - t.n;
    BitensionParts p;
    p.minus_laplacian_tau = k * (t.trace_hessian_grad + 1.5 * t.grad_of_grad_sq + t.nabla_grad_grad
                                 + (t.laplacian_rho + k * t.grad_rho_sq) * t.grad_rho);
    p.curvature_trace
        = k * (-t.ricci_grad - t.laplacian_rho * t.grad_rho - k * t.nabla_grad_grad);
    p.total = p.minus_laplacian_tau - p.curvature_trace;
    return p;
}

Vec bitension_forward_from_terms(const BigradTerms& t)
{
    return (2.0 - t.n) * bigrad_from_terms(t);
}

Vec bitension_forward(const ConformalChange& cc, const Point& x, const FdConfig& cfg)
{
    return bitension_forward_from_terms(bigrad_terms(cc, x, cfg));
}

Vec bitension_reverse_from_terms(const BigradTerms& t)
{
    const double n = t.n;
    return (n - 2.0) * std::exp(-4.0 * t.rho)
           * (t.trace_hessian_grad + (n - 6.0) * t.nabla_grad_grad
              + 2.0 * (t.laplacian_rho - (n - 4.0) * t.grad_rho_sq) * t.grad_rho + t.ricci_grad);
}

Vec bitension_reverse(const ConformalChange& cc, const Point& x, const FdConfig& cfg)
{
    return bitension_reverse_from_terms(bigrad_terms(cc, x, cfg));
}

DefectIdentity defect_identity_from_terms(const BigradTerms& t)
{
    const double n = t.n;
    const double w = std::exp(-4.0 * t.rho);
    DefectIdentity d;
    d.lhs = bitension_reverse_from_terms(t) + w * bitension_forward_from_terms(t);
    d.rhs = w * (n - 2.0) * (n - 6.0) * (t.grad_of_grad_sq - t.grad_rho_sq * t.grad_rho);
    return d;
}

DefectIdentity defect_identity(const ConformalChange& cc, const Point& x, const FdConfig& cfg)
{
    return defect_identity_from_terms(bigrad_terms(cc, x, cfg));
}

Vec identity_tension_fd(const ChartManifold& domain, const ChartManifold& target, const Point& x,
                        const FdConfig& cfg)
{
    const int n = domain.dim;
    const Christoffel Gt = christoffel(target, x, cfg);
    const Christoffel Gd = christoffel(domain, x, cfg);
    const Mat E = orthonormal_frame(domain, x);
    Vec tau = Vec::Zero(n);
    for (int a = 0; a < n; ++a) {
        const Vec e = E.col(a);
        tau += Gt.contract(e, e) - Gd.contract(e, e);
    }
    return tau;
}

Vec bitension_oracle_fd(const ConformalChange& cc, const Point& x, const FdConfig& cfg)
{
    require_tension_dimension(cc);
    const ChartManifold& base = cc.base;
    const ChartManifold target = conformal_metric_manifold(cc);
    VectorField tau;
    tau.value = [base, target, cfg](const Point& y) {
        return identity_tension_fd(base, target, y, cfg);
    };
    const Vec rough = trace_second_covariant(base, target, tau, x, cfg);

    const Riemann Rt = riemann(target, x, cfg);
    const Vec t = tau.value(x);
    const Mat E = orthonormal_frame(base, x);
    Vec curv = Vec::Zero(base.dim);
    for (int a = 0; a < base.dim; ++a) {
        curv += Rt.apply(E.col(a), t, E.col(a));
    }
    return rough - curv;
}

} // namespace biharm
