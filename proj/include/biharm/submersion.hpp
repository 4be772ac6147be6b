#pragma once

/// Product projections pi : (N x R^k, h + flat) -> (N, h) and the composition
/// pi~ = 1 o pi into (N, e^{2 rho} h). Tension and bitension of pi~ are
/// computed for a general map by finite differences, independent of the
/// closed forms for the identity.

#include <functional>

#include "biharm/conformal.hpp"

namespace biharm {

using MapFn = std::function<Point(const Point&)>;

struct ProductSubmersion {
    ChartManifold base;
    int total_dim = 0;

    int fiber_dim() const { return total_dim - base.dim; }

    /// First base.dim coordinates.
    Point project(const Point& x) const { return x.head(base.dim); }
    MapFn projection() const;

    /// Product metric h(pi(x)) + identity on the fiber coordinates.
    ChartManifold total_space() const;

    /// d pi as a base.dim x total_dim matrix.
    Mat differential() const;

    /// max |h(d pi X, d pi Y) - g(X, Y)| over pairs of g-orthonormal
    /// horizontal basis vectors.
    double horizontal_defect(const Point& x) const;
};

/// Throws InvalidArgument unless 0 < base.dim < total_dim.
ProductSubmersion product_submersion(ChartManifold base, int total_dim);

/// tau(phi) = trace_g nabla d phi for phi : (P, g) -> (N, h).
Vec map_tension(const ChartManifold& source, const ChartManifold& target, const MapFn& phi,
                const Point& x, const FdConfig& cfg);

/// tau_2(phi) = trace_g (nabla^phi)^2 tau(phi) - trace_g R^N(d phi, tau(phi)) d phi.
Vec map_bitension(const ChartManifold& source, const ChartManifold& target, const MapFn& phi,
                  const Point& x, const FdConfig& cfg);

Vec tension_of_composition(const ProductSubmersion& ps, const ConformalChange& cc, const Point& x,
                           const FdConfig& cfg);
Vec bitension_of_composition(const ProductSubmersion& ps, const ConformalChange& cc,
                             const Point& x, const FdConfig& cfg);

struct ReductionReport {
    /// |tau(pi~) - tau(1) o pi| at each total-space point.
    ResidualReport tension;
    /// |tau_2(pi~) - tau_2(1) o pi| at each total-space point.
    ResidualReport bitension;
};

/// The comparison values tau(1), tau_2(1) use `reference_cfg`; tau(pi~) uses
/// `tension_cfg` and the nested tau_2(pi~) uses `bitension_cfg`.
ReductionReport reduction_check(const ProductSubmersion& ps, const ConformalChange& cc,
                                const std::vector<Point>& points, const FdConfig& tension_cfg,
                                const FdConfig& bitension_cfg, const FdConfig& reference_cfg);

struct BiharmonicStatus {
    bool nonharmonic = false;
    bool biharmonic = false;
    double max_tension = 0.0;
    double max_bitension = 0.0;

    bool proper() const { return nonharmonic && biharmonic; }
};

struct CorollaryVerdict {
    BiharmonicStatus composition;
    BiharmonicStatus identity;

    bool consistent() const { return composition.proper() == identity.proper(); }
};

/// Both sides of "pi~ nonharmonic biharmonic iff 1 nonharmonic biharmonic",
/// each evaluated on the same points. A map counts as harmonic below
/// `harmonic_tol` and as biharmonic below the respective bitension tolerance.
CorollaryVerdict corollary_verdict(const ProductSubmersion& ps, const ConformalChange& cc,
                                   const std::vector<Point>& points, double harmonic_tol,
                                   double composition_bitension_tol,
                                   double identity_bitension_tol, const FdConfig& tension_cfg,
                                   const FdConfig& bitension_cfg, const FdConfig& reference_cfg);

} // namespace biharm
