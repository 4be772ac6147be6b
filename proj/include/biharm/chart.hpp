#pragma once

/// Single-chart Riemannian manifolds and the coordinate differential
/// operators built on them.
///
/// Conventions used throughout the toolkit:
///  * Christoffel symbols Gamma(k, i, j) = Gamma^k_ij of the Levi-Civita connection.
///  * R(X,Y) = [nabla_X, nabla_Y] - nabla_[X,Y]; in coordinates
///    R(d_i, d_j) d_k = R^l_kij d_l.
///  * Ricci operator Ric(X) = sum_a R(X, E_a) E_a over an orthonormal frame,
///    so the unit n-sphere has Ric = (n-1) Id.
///  * Laplacians carry the geometer's sign: Delta f = -div grad f, and the
///    rough Laplacian of a vector field is -trace nabla^2.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "biharm/fd.hpp"

namespace biharm {

/// Gamma^k_ij stored densely, k slowest.
class Christoffel {
public:
    Christoffel() = default;
    explicit Christoffel(int n) : n_(n), data_(Vec::Zero(static_cast<Eigen::Index>(n) * n * n)) {}
    Christoffel(int n, Vec data) : n_(n), data_(std::move(data)) {}

    int dim() const { return n_; }
    double operator()(int k, int i, int j) const { return data_[index(k, i, j)]; }
    double& operator()(int k, int i, int j) { return data_[index(k, i, j)]; }

    const Vec& flat() const { return data_; }

    /// Gamma(X, Y)^k = Gamma^k_ij X^i Y^j.
    Vec contract(const Vec& X, const Vec& Y) const;

    /// Matrix M(k, m) = Gamma^k_im X^i, i.e. the connection matrix along X.
    Mat along(const Vec& X) const;

private:
    Eigen::Index index(int k, int i, int j) const
    {
        return (static_cast<Eigen::Index>(k) * n_ + i) * n_ + j;
    }

    int n_ = 0;
    Vec data_;
};

/// Riemann tensor R^l_kij (R(d_i, d_j) d_k = R^l_kij d_l).
class Riemann {
public:
    Riemann() = default;
    explicit Riemann(int n) : n_(n), data_(Vec::Zero(static_cast<Eigen::Index>(n) * n * n * n)) {}

    int dim() const { return n_; }
    double operator()(int l, int k, int i, int j) const { return data_[index(l, k, i, j)]; }
    double& operator()(int l, int k, int i, int j) { return data_[index(l, k, i, j)]; }

    /// R(X, Y) Z.
    Vec apply(const Vec& X, const Vec& Y, const Vec& Z) const;

private:
    Eigen::Index index(int l, int k, int i, int j) const
    {
        return ((static_cast<Eigen::Index>(l) * n_ + k) * n_ + i) * n_ + j;
    }

    int n_ = 0;
    Vec data_;
};

struct ChartManifold {
    std::string name;
    int dim = 0;
    std::function<Mat(const Point&)> metric;
    DomainPredicate domain;
    std::function<Christoffel(const Point&)> analytic_christoffel;
    /// Ricci operator components Ric^l_m (mixed type).
    std::function<Mat(const Point&)> analytic_ricci;
    std::optional<double> einstein_constant;

    bool contains(const Point& x) const { return !domain || domain(x); }
};

/// A smooth function on a chart. Analytic derivatives are coordinate
/// partials (d_i f and d_i d_j f), not metric gradients.
struct ScalarField {
    std::function<double(const Point&)> eval;
    std::function<Vec(const Point&)> analytic_grad;
    std::function<Mat(const Point&)> analytic_hessian;

    double operator()(const Point& x) const { return eval(x); }

    /// Same function with the analytic derivatives dropped.
    ScalarField fd_only() const { return ScalarField{eval, {}, {}}; }
};

/// A field of coordinate components. `jacobian`, when present, returns
/// J(k, i) = d_i V_k.
template <class Tag>
struct ComponentField {
    std::function<Vec(const Point&)> value;
    std::function<Mat(const Point&)> jacobian;

    Vec operator()(const Point& x) const { return value(x); }
};

struct VectorTag {};
struct CovectorTag {};

/// Contravariant components in the coordinate basis.
using VectorField = ComponentField<VectorTag>;
/// Covariant components (a 1-form field).
using OneFormField = ComponentField<CovectorTag>;

/// Condition number guard for metric inversion.
inline constexpr double kMaxMetricCondition = 1e10;

/// Metric at x, checked for symmetry and positive definiteness.
Mat metric_at(const ChartManifold& M, const Point& x);

/// Inverse metric with the condition-number guard.
Mat inverse_metric(const ChartManifold& M, const Point& x);

/// Orthonormal frame at x (columns), Gram-Schmidt on the coordinate basis in
/// ascending index order.
Mat orthonormal_frame(const ChartManifold& M, const Point& x);

/// trace_h of a bilinear form given by its coordinate matrix B(i, j).
double trace_h(const ChartManifold& M, const Point& x, const Mat& B);

double inner(const ChartManifold& M, const Point& x, const Vec& X, const Vec& Y);
double norm(const ChartManifold& M, const Point& x, const Vec& X);

/// d_i h at x for every i. Uses metric compatibility with the analytic
/// Christoffels when present, otherwise central differences of the metric.
std::vector<Mat> metric_partials(const ChartManifold& M, const Point& x, const FdConfig& cfg);

Christoffel christoffel(const ChartManifold& M, const Point& x, const FdConfig& cfg);

/// d_m Gamma for each m, by central differences of christoffel().
std::vector<Christoffel> christoffel_partials(const ChartManifold& M, const Point& x,
                                              const FdConfig& cfg);

/// Coordinate partials d_i f.
Vec differential(const ChartManifold& M, const ScalarField& f, const Point& x, const FdConfig& cfg);

/// Coordinate second partials d_i d_j f.
Mat second_differential(const ChartManifold& M, const ScalarField& f, const Point& x,
                        const FdConfig& cfg);

/// Metric gradient h^ij d_j f.
Vec grad(const ChartManifold& M, const ScalarField& f, const Point& x, const FdConfig& cfg);

/// Covariant Hessian (nabla^2 f)_ij = d_i d_j f - Gamma^k_ij d_k f.
Mat hessian(const ChartManifold& M, const ScalarField& f, const Point& x, const FdConfig& cfg);

/// Delta f = -trace_h Hess f.
double laplacian_scalar(const ChartManifold& M, const ScalarField& f, const Point& x,
                        const FdConfig& cfg);

/// grad f as a vector field; carries a Jacobian when f has an analytic Hessian.
VectorField grad_field(const ChartManifold& M, const ScalarField& f, const FdConfig& cfg);

/// d f as a 1-form field; carries a Jacobian when f has an analytic Hessian.
OneFormField differential_field(const ChartManifold& M, const ScalarField& f, const FdConfig& cfg);

/// Scalar field x -> Delta f (x).
ScalarField laplacian_field(const ChartManifold& M, const ScalarField& f, const FdConfig& cfg);

/// Coordinate Jacobian d_i X^k, analytic if the field carries one.
template <class Tag>
Mat component_jacobian(const ChartManifold& M, const ComponentField<Tag>& X, const Point& x,
                       const FdConfig& cfg)
{
    if (X.jacobian) {
        return X.jacobian(x);
    }
    fd::check_stencil(M.domain, x, cfg);
    return fd::jacobian(X.value, x, cfg);
}

/// D(k, i) = (nabla_i X)^k = d_i X^k + Gamma^k_im X^m.
Mat covariant_jacobian(const ChartManifold& M, const VectorField& X, const Point& x,
                       const FdConfig& cfg);

/// nabla_Y X at x.
Vec covariant_derivative_vec(const ChartManifold& M, const VectorField& X, const Vec& Y,
                             const Point& x, const FdConfig& cfg);

/// trace nabla^2 X for a vector field X: V -> V along the identity, where the
/// outer covariant derivative uses `target`'s connection and the second
/// fundamental correction uses `domain`'s. With domain == target this is the
/// ordinary trace of the second covariant derivative; the trace is over a
/// domain-orthonormal frame.
Vec trace_second_covariant(const ChartManifold& domain, const ChartManifold& target,
                           const VectorField& X, const Point& x, const FdConfig& cfg);

/// trace_h nabla^2 X (= minus the rough Laplacian).
Vec rough_laplacian_vec(const ChartManifold& M, const VectorField& X, const Point& x,
                        const FdConfig& cfg);

/// Riemann tensor from Christoffels and their finite-difference partials.
Riemann riemann(const ChartManifold& M, const Point& x, const FdConfig& cfg);

/// Ricci operator contracted from a Riemann tensor: Ric^l_m = h^ik R^l_kmi.
Mat ricci_from_riemann(const ChartManifold& M, const Point& x, const Riemann& R);

/// Ricci operator; the analytic one when supplied, else contracted from riemann().
Mat ricci_operator(const ChartManifold& M, const Point& x, const FdConfig& cfg);

struct CurvatureAt {
    Riemann riemann;
    Mat ricci;

    Vec apply(const Vec& X, const Vec& Y, const Vec& Z) const { return riemann.apply(X, Y, Z); }
};

CurvatureAt riemann_and_ricci(const ChartManifold& M, const Point& x, const FdConfig& cfg);

} // namespace biharm
