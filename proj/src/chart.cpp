#include "biharm/chart.hpp"

#include <cmath>
#include <sstream>

namespace biharm {

Vec Christoffel::contract(const Vec& X, const Vec& Y) const
{
    Vec out = Vec::Zero(n_);
    for (int k = 0; k < n_; ++k) {
        double s = 0.0;
        for (int i = 0; i < n_; ++i) {
            for (int j = 0; j < n_; ++j) {
                s += (*this)(k, i, j) * X[i] * Y[j];
            }
        }
        out[k] = s;
    }
    return out;
}

Mat Christoffel::along(const Vec& X) const
{
    Mat out = Mat::Zero(n_, n_);
    for (int k = 0; k < n_; ++k) {
        for (int m = 0; m < n_; ++m) {
            double s = 0.0;
            for (int i = 0; i < n_; ++i) {
                s += (*this)(k, i, m) * X[i];
            }
            out(k, m) = s;
        }
    }
    return out;
}

Vec Riemann::apply(const Vec& X, const Vec& Y, const Vec& Z) const
{
    Vec out = Vec::Zero(n_);
    for (int l = 0; l < n_; ++l) {
        double s = 0.0;
        for (int k = 0; k < n_; ++k) {
            if (Z[k] == 0.0) {
                continue;
            }
            for (int i = 0; i < n_; ++i) {
                for (int j = 0; j < n_; ++j) {
                    s += (*this)(l, k, i, j) * Z[k] * X[i] * Y[j];
                }
            }
        }
        out[l] = s;
    }
    return out;
}

Mat metric_at(const ChartManifold& M, const Point& x)
{
    if (x.size() != M.dim) {
        throw InvalidArgument("point dimension " + std::to_string(x.size())
                              + " does not match manifold dimension " + std::to_string(M.dim));
    }
    if (!M.contains(x)) {
        throw DomainError("point " + fd::detail::describe(x) + " is outside the domain of "
                          + M.name);
    }
    Mat h = M.metric(x);
    const double scale = h.cwiseAbs().maxCoeff();
    if (!((h - h.transpose()).cwiseAbs().maxCoeff() <= 1e-14 * std::max(scale, 1.0))) {
        throw SingularMetricError("metric of " + M.name + " is not symmetric at "
                                  + fd::detail::describe(x));
    }
    if (Eigen::LLT<Mat>(h).info() != Eigen::Success) {
        throw SingularMetricError("metric of " + M.name + " is not positive definite at "
                                  + fd::detail::describe(x));
    }
    return h;
}

Mat inverse_metric(const ChartManifold& M, const Point& x)
{
    const Mat h = metric_at(M, x);
    Eigen::SelfAdjointEigenSolver<Mat> es(h);
    const Vec& lambda = es.eigenvalues();
    const double lo = lambda.minCoeff();
    const double hi = lambda.maxCoeff();
    if (!(lo > 0.0) || hi / lo > kMaxMetricCondition) {
        std::ostringstream os;
        os << "metric of " << M.name << " is singular or ill-conditioned at "
           << fd::detail::describe(x) << " (eigenvalues in [" << lo << ", " << hi << "])";
        throw SingularMetricError(os.str());
    }
    const Mat& V = es.eigenvectors();
    Mat inv = V * lambda.cwiseInverse().asDiagonal() * V.transpose();
    return 0.5 * (inv + inv.transpose());
}

Mat orthonormal_frame(const ChartManifold& M, const Point& x)
{
    const Mat h = metric_at(M, x);
    const int n = M.dim;
    Mat E = Mat::Identity(n, n);
    for (int a = 0; a < n; ++a) {
        Vec v = E.col(a);
        for (int b = 0; b < a; ++b) {
            const Vec e = E.col(b);
            v -= (e.dot(h * v)) * e;
        }
        const double len2 = v.dot(h * v);
        if (!(len2 > 0.0)) {
            throw SingularMetricError("Gram-Schmidt breakdown for " + M.name);
        }
        E.col(a) = v / std::sqrt(len2);
    }
    return E;
}

double trace_h(const ChartManifold& M, const Point& x, const Mat& B)
{
    const Mat E = orthonormal_frame(M, x);
    double s = 0.0;
    for (int a = 0; a < E.cols(); ++a) {
        s += E.col(a).dot(B * E.col(a));
    }
    return s;
}

double inner(const ChartManifold& M, const Point& x, const Vec& X, const Vec& Y)
{
    return X.dot(metric_at(M, x) * Y);
}

double norm(const ChartManifold& M, const Point& x, const Vec& X)
{
    return std::sqrt(std::max(0.0, inner(M, x, X, X)));
}

std::vector<Mat> metric_partials(const ChartManifold& M, const Point& x, const FdConfig& cfg)
{
    const int n = M.dim;
    std::vector<Mat> dh(n);
    if (M.analytic_christoffel) {
        const Mat h = metric_at(M, x);
        const Christoffel G = M.analytic_christoffel(x);
        for (int i = 0; i < n; ++i) {
            Mat d(n, n);
            for (int j = 0; j < n; ++j) {
                for (int l = 0; l < n; ++l) {
                    double s = 0.0;
                    for (int k = 0; k < n; ++k) {
                        s += h(l, k) * G(k, i, j) + h(j, k) * G(k, i, l);
                    }
                    d(j, l) = s;
                }
            }
            dh[i] = d;
        }
        return dh;
    }
    fd::check_stencil(M.domain, x, cfg);
    auto metric = [&M](const Point& y) { return metric_at(M, y); };
    for (int i = 0; i < n; ++i) {
        dh[i] = fd::partial(metric, x, i, cfg);
    }
    return dh;
}

Christoffel christoffel(const ChartManifold& M, const Point& x, const FdConfig& cfg)
{
    if (M.analytic_christoffel) {
        if (!M.contains(x)) {
            throw DomainError("point " + fd::detail::describe(x) + " is outside the domain of "
                              + M.name);
        }
        return M.analytic_christoffel(x);
    }
    const int n = M.dim;
    const Mat hinv = inverse_metric(M, x);
    const auto dh = metric_partials(M, x, cfg);
    Christoffel G(n);
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            for (int k = 0; k < n; ++k) {
                double s = 0.0;
                for (int l = 0; l < n; ++l) {
                    s += hinv(k, l) * (dh[i](j, l) + dh[j](i, l) - dh[l](i, j));
                }
                G(k, i, j) = 0.5 * s;
                G(k, j, i) = 0.5 * s;
            }
        }
    }
    return G;
}

std::vector<Christoffel> christoffel_partials(const ChartManifold& M, const Point& x,
                                              const FdConfig& cfg)
{
    fd::check_stencil(M.domain, x, cfg);
    const int n = M.dim;
    auto flat = [&](const Point& y) { return christoffel(M, y, cfg).flat(); };
    std::vector<Christoffel> out;
    out.reserve(n);
    for (int m = 0; m < n; ++m) {
        out.emplace_back(n, fd::partial(flat, x, m, cfg));
    }
    return out;
}

Vec differential(const ChartManifold& M, const ScalarField& f, const Point& x, const FdConfig& cfg)
{
    if (f.analytic_grad) {
        if (!M.contains(x)) {
            throw DomainError("point " + fd::detail::describe(x) + " is outside the domain of "
                              + M.name);
        }
        return f.analytic_grad(x);
    }
    fd::check_stencil(M.domain, x, cfg);
    return fd::partials(f.eval, x, cfg);
}

Mat second_differential(const ChartManifold& M, const ScalarField& f, const Point& x,
                        const FdConfig& cfg)
{
    if (f.analytic_hessian) {
        if (!M.contains(x)) {
            throw DomainError("point " + fd::detail::describe(x) + " is outside the domain of "
                              + M.name);
        }
        return f.analytic_hessian(x);
    }
    fd::check_stencil(M.domain, x, cfg);
    if (f.analytic_grad) {
        const Mat J = fd::jacobian(f.analytic_grad, x, cfg);
        return 0.5 * (J + J.transpose());
    }
    return fd::second_partials(f.eval, x, cfg);
}

Vec grad(const ChartManifold& M, const ScalarField& f, const Point& x, const FdConfig& cfg)
{
    return inverse_metric(M, x) * differential(M, f, x, cfg);
}

Mat hessian(const ChartManifold& M, const ScalarField& f, const Point& x, const FdConfig& cfg)
{
    const Vec df = differential(M, f, x, cfg);
    Mat H = second_differential(M, f, x, cfg);
    const Christoffel G = christoffel(M, x, cfg);
    const int n = M.dim;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int k = 0; k < n; ++k) {
                s += G(k, i, j) * df[k];
            }
            H(i, j) -= s;
        }
    }
    return H;
}

double laplacian_scalar(const ChartManifold& M, const ScalarField& f, const Point& x,
                        const FdConfig& cfg)
{
    return -trace_h(M, x, hessian(M, f, x, cfg));
}

VectorField grad_field(const ChartManifold& M, const ScalarField& f, const FdConfig& cfg)
{
    VectorField X;
    X.value = [M, f, cfg](const Point& y) { return grad(M, f, y, cfg); };
    if (f.analytic_hessian) {
        X.jacobian = [M, f, cfg](const Point& y) {
            const Mat hinv = inverse_metric(M, y);
            const Vec df = differential(M, f, y, cfg);
            const Mat H = second_differential(M, f, y, cfg);
            const auto dh = metric_partials(M, y, cfg);
            Mat J = hinv * H;
            for (int i = 0; i < M.dim; ++i) {
                J.col(i) -= hinv * (dh[i] * (hinv * df));
            }
            return J;
        };
    }
    return X;
}

OneFormField differential_field(const ChartManifold& M, const ScalarField& f, const FdConfig& cfg)
{
    OneFormField a;
    a.value = [M, f, cfg](const Point& y) { return differential(M, f, y, cfg); };
    if (f.analytic_hessian) {
        a.jacobian = [M, f, cfg](const Point& y) { return second_differential(M, f, y, cfg); };
    }
    return a;
}

ScalarField laplacian_field(const ChartManifold& M, const ScalarField& f, const FdConfig& cfg)
{
    return ScalarField{[M, f, cfg](const Point& y) { return laplacian_scalar(M, f, y, cfg); }, {},
                       {}};
}

namespace {

Mat connection_jacobian(const ChartManifold& target, const VectorField& X, const Point& x,
                        const FdConfig& cfg, const Christoffel& G)
{
    const Vec v = X.value(x);
    return component_jacobian(target, X, x, cfg) + G.along(v);
}

} // namespace

Mat covariant_jacobian(const ChartManifold& M, const VectorField& X, const Point& x,
                       const FdConfig& cfg)
{
    return connection_jacobian(M, X, x, cfg, christoffel(M, x, cfg));
}

Vec covariant_derivative_vec(const ChartManifold& M, const VectorField& X, const Vec& Y,
                             const Point& x, const FdConfig& cfg)
{
    return covariant_jacobian(M, X, x, cfg) * Y;
}

Vec trace_second_covariant(const ChartManifold& domain, const ChartManifold& target,
                           const VectorField& X, const Point& x, const FdConfig& cfg)
{
    const int n = domain.dim;
    fd::check_stencil(domain.domain, x, cfg);
    const Christoffel Gt = christoffel(target, x, cfg);
    const Christoffel Gd = christoffel(domain, x, cfg);
    const Mat D = connection_jacobian(target, X, x, cfg, Gt);

    // dD[i](k, j) = d_i D^k_j
    std::vector<Mat> dD(n);
    if (X.jacobian) {
        auto Dflat = [&](const Point& y) {
            const Mat Dy = connection_jacobian(target, X, y, cfg, christoffel(target, y, cfg));
            return Vec(Eigen::Map<const Vec>(Dy.data(), Dy.size()));
        };
        for (int i = 0; i < n; ++i) {
            const Vec d = fd::partial(Dflat, x, i, cfg);
            dD[i] = Eigen::Map<const Mat>(d.data(), n, n);
        }
    } else {
        const Vec v = X.value(x);
        const Mat dX = fd::jacobian(X.value, x, cfg);
        const auto dG = christoffel_partials(target, x, cfg);
        for (int i = 0; i < n; ++i) {
            Mat m(n, n);
            for (int j = 0; j < n; ++j) {
                m.col(j) = fd::second_partial(X.value, x, i, j, cfg);
            }
            m += dG[i].along(v) + Gt.along(dX.col(i));
            dD[i] = m;
        }
    }

    const Mat E = orthonormal_frame(domain, x);
    const Mat G = E * E.transpose();
    Vec out = Vec::Zero(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (G(i, j) == 0.0) {
                continue;
            }
            Vec term = dD[i].col(j);
            for (int k = 0; k < n; ++k) {
                double s = 0.0;
                for (int l = 0; l < n; ++l) {
                    s += Gt(k, i, l) * D(l, j) - Gd(l, i, j) * D(k, l);
                }
                term[k] += s;
            }
            out += G(i, j) * term;
        }
    }
    return out;
}

Vec rough_laplacian_vec(const ChartManifold& M, const VectorField& X, const Point& x,
                        const FdConfig& cfg)
{
    return trace_second_covariant(M, M, X, x, cfg);
}

Riemann riemann(const ChartManifold& M, const Point& x, const FdConfig& cfg)
{
    const int n = M.dim;
    const Christoffel G = christoffel(M, x, cfg);
    const auto dG = christoffel_partials(M, x, cfg);
    Riemann R(n);
    for (int l = 0; l < n; ++l) {
        for (int k = 0; k < n; ++k) {
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < n; ++j) {
                    double s = dG[i](l, j, k) - dG[j](l, i, k);
                    for (int m = 0; m < n; ++m) {
                        s += G(l, i, m) * G(m, j, k) - G(l, j, m) * G(m, i, k);
                    }
                    R(l, k, i, j) = s;
                }
            }
        }
    }
    return R;
}

Mat ricci_from_riemann(const ChartManifold& M, const Point& x, const Riemann& R)
{
    const int n = M.dim;
    const Mat E = orthonormal_frame(M, x);
    const Mat G = E * E.transpose();
    Mat Ric = Mat::Zero(n, n);
    for (int l = 0; l < n; ++l) {
        for (int m = 0; m < n; ++m) {
            double s = 0.0;
            for (int i = 0; i < n; ++i) {
                for (int k = 0; k < n; ++k) {
                    s += G(i, k) * R(l, k, m, i);
                }
            }
            Ric(l, m) = s;
        }
    }
    return Ric;
}

Mat ricci_operator(const ChartManifold& M, const Point& x, const FdConfig& cfg)
{
    if (M.analytic_ricci) {
        if (!M.contains(x)) {
            throw DomainError("point " + fd::detail::describe(x) + " is outside the domain of "
                              + M.name);
        }
        return M.analytic_ricci(x);
    }
    return ricci_from_riemann(M, x, riemann(M, x, cfg));
}

CurvatureAt riemann_and_ricci(const ChartManifold& M, const Point& x, const FdConfig& cfg)
{
    CurvatureAt c;
    c.riemann = riemann(M, x, cfg);
    c.ricci = M.analytic_ricci ? M.analytic_ricci(x) : ricci_from_riemann(M, x, c.riemann);
    return c;
}

} // namespace biharm
