#pragma once

/// Model spaces used by the experiments and tests.

#include "biharm/chart.hpp"

namespace biharm::models {

/// Flat R^n.
ChartManifold euclidean(int n);

/// Flat open orthant {x : x^i > 0 for all i}.
ChartManifold half_space(int n);

/// Conformally flat metric e^{2 phi} delta with analytic Christoffels
/// Gamma^k_ij = delta^k_i phi_j + delta^k_j phi_i - delta_ij phi_k.
/// `phi` must carry an analytic gradient.
ChartManifold conformally_flat(std::string name, int n, ScalarField phi, DomainPredicate domain = {});

/// e^{2 x^1} delta on R^n.
ChartManifold exp_conformal(int n);

/// Unit n-sphere in the stereographic chart from the north pole:
/// h = 4 / (1 + |x|^2)^2 delta. Einstein with constant n - 1.
ChartManifold sphere_stereo(int n);

/// Christoffels of e^{2 phi} delta from the partials of phi.
Christoffel conformally_flat_christoffel(const Vec& dphi);

} // namespace biharm::models
