#pragma once

/// Conformal change h~ = e^{2 rho} h of the codomain metric: the connection
/// difference tensor P, the changed curvature, tension and bitension fields
/// of the identity maps 1 : (N, h) -> (N, h~) and 1~ : (N, h~) -> (N, h),
/// and a definitional finite-difference oracle for tau_2(1).
///
/// All traces are taken over h-orthonormal frames, including traces of
/// h~-objects.

#include "biharm/chart.hpp"
#include "biharm/residual.hpp"

namespace biharm {

struct ConformalChange {
    ChartManifold base;
    ScalarField rho;

    int n() const { return base.dim; }
};

/// (N, e^{2 rho} h) as a chart manifold. Its Christoffels and curvature come
/// from finite differences of the metric values only.
ChartManifold conformal_metric_manifold(const ConformalChange& cc);

/// grad rho as a vector field on the base.
VectorField grad_rho_field(const ConformalChange& cc, const FdConfig& cfg);

/// P(X, Y) = X(rho) Y + Y(rho) X - h(X, Y) grad rho.
Vec p_tensor(const ConformalChange& cc, const Vec& X, const Vec& Y, const Point& x,
             const FdConfig& cfg);

/// nabla~_Y X = nabla_Y X + P(Y, X).
Vec conformal_connection(const ConformalChange& cc, const VectorField& X, const Vec& Y,
                         const Point& x, const FdConfig& cfg);

/// (nabla_X P)(Y, Z) - (nabla_Y P)(X, Z), expanded through nabla grad rho.
Vec nabla_p_antisymmetrized(const ConformalChange& cc, const Vec& X, const Vec& Y, const Vec& Z,
                            const Point& x, const FdConfig& cfg);

/// R~(X, Y) Z = R(X, Y) Z + (nabla_X P)(Y, Z) - (nabla_Y P)(X, Z)
///             + P(X, P(Y, Z)) - P(Y, P(X, Z)).
Vec conformal_curvature(const ConformalChange& cc, const Vec& X, const Vec& Y, const Vec& Z,
                        const Point& x, const FdConfig& cfg);

/// tau(1) = (2 - n) grad rho.
Vec tension_forward(const ConformalChange& cc, const Point& x, const FdConfig& cfg);

/// tau(1~) = -e^{-2 rho} (2 - n) grad rho.
Vec tension_reverse(const ConformalChange& cc, const Point& x, const FdConfig& cfg);

/// Ingredients shared by the bitension formulas, all with respect to h.
struct BigradTerms {
    int n = 0;
    double rho = 0.0;
    Vec grad_rho;
    double laplacian_rho = 0.0;
    double grad_rho_sq = 0.0;
    /// trace_h nabla^2 grad rho
    Vec trace_hessian_grad;
    /// grad(|grad rho|^2)
    Vec grad_of_grad_sq;
    /// nabla_{grad rho} grad rho
    Vec nabla_grad_grad;
    /// Ric(grad rho)
    Vec ricci_grad;
};

BigradTerms bigrad_terms(const ConformalChange& cc, const Point& x, const FdConfig& cfg);

/// B(rho) = trace nabla^2 grad rho + (2 Delta rho + (2-n)|grad rho|^2) grad rho
///        + (6-n)/2 grad |grad rho|^2 + Ric(grad rho).
Vec bigrad_from_terms(const BigradTerms& t);
Vec bigrad_residual(const ConformalChange& cc, const Point& x, const FdConfig& cfg);

/// The two halves of tau_2(1) = -Delta tau(1) - trace R~(., tau(1)) .
struct BitensionParts {
    /// -Delta tau(1) = (2-n){trace nabla^2 grad rho + 3/2 grad|grad rho|^2
    ///                 + nabla_{grad rho} grad rho + (Delta rho + (2-n)|grad rho|^2) grad rho}
    Vec minus_laplacian_tau;
    /// trace R~(., tau(1)) . = (2-n){-Ric(grad rho) - Delta rho grad rho
    ///                         - (2-n) nabla_{grad rho} grad rho}
    Vec curvature_trace;
    Vec total;
};

BitensionParts bitension_forward_parts(const BigradTerms& t);

/// tau_2(1) = (2 - n) B(rho).
Vec bitension_forward(const ConformalChange& cc, const Point& x, const FdConfig& cfg);
Vec bitension_forward_from_terms(const BigradTerms& t);

/// tau_2(1~) = (n-2) e^{-4 rho} {trace nabla^2 grad rho + (n-6) nabla_{grad rho} grad rho
///             + 2(Delta rho - (n-4)|d rho|^2) grad rho + Ric(grad rho)}.
Vec bitension_reverse(const ConformalChange& cc, const Point& x, const FdConfig& cfg);
Vec bitension_reverse_from_terms(const BigradTerms& t);

struct DefectIdentity {
    /// tau_2(1~) + e^{-4 rho} tau_2(1)
    Vec lhs;
    /// e^{-4 rho} (n-2)(n-6) {grad|grad rho|^2 - |grad rho|^2 grad rho}
    Vec rhs;
};

DefectIdentity defect_identity(const ConformalChange& cc, const Point& x, const FdConfig& cfg);
DefectIdentity defect_identity_from_terms(const BigradTerms& t);

/// Tension of the identity (domain, h_d) -> (target, h_t) straight from the
/// definition: trace_{h_d} (Gamma_t - Gamma_d).
Vec identity_tension_fd(const ChartManifold& domain, const ChartManifold& target, const Point& x,
                        const FdConfig& cfg);

/// tau_2(1) = trace_h nabla~^2 tau - sum_a R~(E_a, tau) E_a with tau, the
/// pulled-back connection and R~ all computed from finite differences of
/// e^{2 rho} h. Independent of the assembled formulas above.
Vec bitension_oracle_fd(const ConformalChange& cc, const Point& x, const FdConfig& cfg);

} // namespace biharm
