#include "biharm/models.hpp"

#include <cmath>

namespace biharm::models {

namespace {

Christoffel zero_christoffel(int n)
{
    return Christoffel(n);
}

} // namespace

ChartManifold euclidean(int n)
{
    ChartManifold M;
    M.name = "euclidean(" + std::to_string(n) + ")";
    M.dim = n;
    M.metric = [n](const Point&) { return Mat(Mat::Identity(n, n)); };
    M.analytic_christoffel = [n](const Point&) { return zero_christoffel(n); };
    M.analytic_ricci = [n](const Point&) { return Mat(Mat::Zero(n, n)); };
    M.einstein_constant = 0.0;
    return M;
}

ChartManifold half_space(int n)
{
    ChartManifold M = euclidean(n);
    M.name = "half_space(" + std::to_string(n) + ")";
    M.domain = [](const Point& x) { return (x.array() > 0.0).all(); };
    return M;
}

Christoffel conformally_flat_christoffel(const Vec& dphi)
{
    const int n = static_cast<int>(dphi.size());
    Christoffel G(n);
    for (int k = 0; k < n; ++k) {
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                double s = 0.0;
                if (k == i) {
                    s += dphi[j];
                }
                if (k == j) {
                    s += dphi[i];
                }
                if (i == j) {
                    s -= dphi[k];
                }
                G(k, i, j) = s;
            }
        }
    }
    return G;
}

ChartManifold conformally_flat(std::string name, int n, ScalarField phi, DomainPredicate domain)
{
    if (!phi.analytic_grad) {
        throw InvalidArgument("conformally_flat needs an analytic gradient of the exponent");
    }
    ChartManifold M;
    M.name = std::move(name);
    M.dim = n;
    M.domain = std::move(domain);
    M.metric = [n, phi](const Point& x) {
        return Mat(std::exp(2.0 * phi(x)) * Mat::Identity(n, n));
    };
    M.analytic_christoffel = [phi](const Point& x) {
        return conformally_flat_christoffel(phi.analytic_grad(x));
    };
    return M;
}

ChartManifold exp_conformal(int n)
{
    ScalarField phi;
    phi.eval = [](const Point& x) { return x[0]; };
    phi.analytic_grad = [n](const Point&) {
        Vec g = Vec::Zero(n);
        g[0] = 1.0;
        return g;
    };
    return conformally_flat("exp_conformal(" + std::to_string(n) + ")", n, phi);
}

ChartManifold sphere_stereo(int n)
{
    ScalarField phi;
    phi.eval = [](const Point& x) { return std::log(2.0) - std::log1p(x.squaredNorm()); };
    phi.analytic_grad = [](const Point& x) {
        return Vec(-2.0 * x / (1.0 + x.squaredNorm()));
    };
    ChartManifold M = conformally_flat("sphere_stereo(" + std::to_string(n) + ")", n, phi);
    const double c = n - 1.0;
    M.analytic_ricci = [n, c](const Point&) { return Mat(c * Mat::Identity(n, n)); };
    M.einstein_constant = c;
    return M;
}

} // namespace biharm::models
