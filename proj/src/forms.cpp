#include "biharm/forms.hpp"

namespace biharm {

OneForm flat(const ChartManifold& M, const Vec& X, const Point& x)
{
    return OneForm{metric_at(M, x) * X};
}

Vec sharp(const ChartManifold& M, const OneForm& alpha, const Point& x)
{
    return metric_at(M, x).llt().solve(alpha.comp);
}

TwoFormValue wedge(const OneForm& beta, const OneForm& alpha)
{
    const Mat m = beta.comp * alpha.comp.transpose();
    return TwoFormValue{m - m.transpose()};
}

TwoFormValue exterior_derivative(const ChartManifold& M, const OneFormField& omega, const Point& x,
                                 const FdConfig& cfg)
{
    const Mat d = component_jacobian(M, omega, x, cfg).transpose(); // d(i, j) = d_i omega_j
    return TwoFormValue{d - d.transpose()};
}

namespace {

// A(j, k) = (nabla_j alpha)_k = d_j alpha_k - Gamma^m_jk alpha_m
Mat form_covariant_jacobian(const ChartManifold& M, const OneFormField& alpha, const Point& x,
                            const FdConfig& cfg)
{
    const int n = M.dim;
    const Vec a = alpha.value(x);
    const Christoffel G = christoffel(M, x, cfg);
    Mat A = component_jacobian(M, alpha, x, cfg).transpose();
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
            double s = 0.0;
            for (int m = 0; m < n; ++m) {
                s += G(m, j, k) * a[m];
            }
            A(j, k) -= s;
        }
    }
    return A;
}

Mat inverse_frame_gram(const ChartManifold& M, const Point& x)
{
    const Mat E = orthonormal_frame(M, x);
    return E * E.transpose();
}

} // namespace

double codifferential(const ChartManifold& M, const OneFormField& alpha, const Point& x,
                      const FdConfig& cfg)
{
    const Mat A = form_covariant_jacobian(M, alpha, x, cfg);
    return -(inverse_frame_gram(M, x).cwiseProduct(A)).sum();
}

OneForm trace_second_covariant_form(const ChartManifold& M, const OneFormField& alpha,
                                    const Point& x, const FdConfig& cfg)
{
    const int n = M.dim;
    fd::check_stencil(M.domain, x, cfg);
    const Christoffel G = christoffel(M, x, cfg);
    const Mat A = form_covariant_jacobian(M, alpha, x, cfg);
    auto Aflat = [&](const Point& y) {
        const Mat Ay = form_covariant_jacobian(M, alpha, y, cfg);
        return Vec(Eigen::Map<const Vec>(Ay.data(), Ay.size()));
    };
    const Mat gram = inverse_frame_gram(M, x);
    Vec out = Vec::Zero(n);
    for (int i = 0; i < n; ++i) {
        const Vec dflat = fd::partial(Aflat, x, i, cfg);
        const Eigen::Map<const Mat> dA(dflat.data(), n, n); // dA(j, k) = d_i A_jk
        for (int j = 0; j < n; ++j) {
            if (gram(i, j) == 0.0) {
                continue;
            }
            for (int k = 0; k < n; ++k) {
                double s = dA(j, k);
                for (int m = 0; m < n; ++m) {
                    s -= G(m, i, j) * A(m, k) + G(m, i, k) * A(j, m);
                }
                out[k] += gram(i, j) * s;
            }
        }
    }
    return OneForm{out};
}

OneForm weitzenboeck_laplacian(const ChartManifold& M, const OneFormField& alpha, const Point& x,
                               const FdConfig& cfg)
{
    const Vec a = alpha.value(x);
    const Mat Ric = ricci_operator(M, x, cfg);
    return OneForm{-trace_second_covariant_form(M, alpha, x, cfg).comp + Ric.transpose() * a};
}

OneForm hodge_laplacian_exact(const ChartManifold& M, const OneFormField& alpha, const Point& x,
                              const FdConfig& cfg)
{
    fd::check_stencil(M.domain, x, cfg);
    auto codiff = [&](const Point& y) { return codifferential(M, alpha, y, cfg); };
    return OneForm{fd::partials(codiff, x, cfg)};
}

OneFormField ricci_form_field(const ChartManifold& M, const OneFormField& alpha,
                              const FdConfig& cfg)
{
    OneFormField w;
    w.value = [M, alpha, cfg](const Point& y) {
        const Vec a = alpha.value(y);
        return Vec(metric_at(M, y) * (ricci_operator(M, y, cfg) * (inverse_metric(M, y) * a)));
    };
    return w;
}

namespace {

// d |alpha|^2 with alpha = d rho.
Vec d_alpha_sq(const ConformalChange& cc, const OneFormField& alpha, const Point& x,
               const FdConfig& cfg)
{
    const ChartManifold& M = cc.base;
    if (cc.rho.analytic_hessian) {
        const Vec g = inverse_metric(M, x) * alpha.value(x);
        return 2.0 * hessian(M, cc.rho, x, cfg) * g;
    }
    fd::check_stencil(M.domain, x, cfg);
    auto sq = [&](const Point& y) {
        const Vec a = alpha.value(y);
        return a.dot(inverse_metric(M, y) * a);
    };
    return fd::partials(sq, x, cfg);
}

} // namespace

OneForm bidif_residual(const ConformalChange& cc, const Point& x, const FdConfig& cfg)
{
    const ChartManifold& M = cc.base;
    const double n = cc.n();
    const OneFormField alpha = differential_field(M, cc.rho, cfg);
    const Vec a = alpha.value(x);
    const double a_sq = a.dot(inverse_metric(M, x) * a);
    const Vec lap = hodge_laplacian_exact(M, alpha, x, cfg).comp;
    const double codiff = codifferential(M, alpha, x, cfg);
    const Vec ric = ricci_form_field(M, alpha, cfg).value(x);
    return OneForm{-lap + 0.5 * (6.0 - n) * d_alpha_sq(cc, alpha, x, cfg)
                   + (2.0 * codiff + (2.0 - n) * a_sq) * a + 2.0 * ric};
}

TwoFormValue consecdif_residual(const ConformalChange& cc, const Point& x, const FdConfig& cfg)
{
    const ChartManifold& M = cc.base;
    const double n = cc.n();
    const OneFormField alpha = differential_field(M, cc.rho, cfg);
    const OneForm a{alpha.value(x)};
    const OneFormField ric = ricci_form_field(M, alpha, cfg);
    const OneForm w{ric.value(x)};
    const OneForm das{d_alpha_sq(cc, alpha, x, cfg)};
    return TwoFormValue{(4.0 - n) * wedge(das, a).comp + 2.0 * wedge(w, a).comp
                        + exterior_derivative(M, ric, x, cfg).comp};
}

} // namespace biharm
