#pragma once

/// 1-form reformulation of the biharmonic condition for the identity
/// 1 : (N, h) -> (N, e^{2 rho} h), with alpha = d rho.

#include "biharm/conformal.hpp"

namespace biharm {

struct OneForm {
    Vec comp;
};

/// Evaluation of a 2-form on coordinate basis pairs; antisymmetric.
struct TwoFormValue {
    Mat comp;

    double max_abs() const { return comp.size() ? comp.cwiseAbs().maxCoeff() : 0.0; }
};

OneForm flat(const ChartManifold& M, const Vec& X, const Point& x);
Vec sharp(const ChartManifold& M, const OneForm& alpha, const Point& x);

/// (beta ^ alpha)(X, Y) = beta(X) alpha(Y) - beta(Y) alpha(X).
TwoFormValue wedge(const OneForm& beta, const OneForm& alpha);

/// (d omega)(d_i, d_j) = d_i omega_j - d_j omega_i.
TwoFormValue exterior_derivative(const ChartManifold& M, const OneFormField& omega, const Point& x,
                                 const FdConfig& cfg);

/// d* alpha = -sum_a (nabla_{E_a} alpha)(E_a); d* d rho = Delta rho.
double codifferential(const ChartManifold& M, const OneFormField& alpha, const Point& x,
                      const FdConfig& cfg);

/// trace nabla^2 alpha over an h-orthonormal frame.
OneForm trace_second_covariant_form(const ChartManifold& M, const OneFormField& alpha,
                                    const Point& x, const FdConfig& cfg);

/// Delta alpha = -trace nabla^2 alpha + alpha o Ric.
OneForm weitzenboeck_laplacian(const ChartManifold& M, const OneFormField& alpha, const Point& x,
                               const FdConfig& cfg);

/// Delta alpha = d(d* alpha), valid for closed alpha (d* d alpha vanishes).
OneForm hodge_laplacian_exact(const ChartManifold& M, const OneFormField& alpha, const Point& x,
                              const FdConfig& cfg);

/// (Ric alpha^sharp)^flat as a field.
OneFormField ricci_form_field(const ChartManifold& M, const OneFormField& alpha,
                              const FdConfig& cfg);

/// -Delta alpha + (6-n)/2 d|alpha|^2 + (2 d*alpha + (2-n)|alpha|^2) alpha
///  + 2 (Ric alpha^sharp)^flat, with Delta alpha = d d* alpha.
OneForm bidif_residual(const ConformalChange& cc, const Point& x, const FdConfig& cfg);

/// (4-n) d|alpha|^2 ^ alpha + 2 (Ric alpha^sharp)^flat ^ alpha + d (Ric alpha^sharp)^flat.
TwoFormValue consecdif_residual(const ConformalChange& cc, const Point& x, const FdConfig& cfg);

} // namespace biharm
