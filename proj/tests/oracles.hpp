#pragma once

// Brute-force reference computations, written against raw metric values
// with their own difference quotients.

#include <Eigen/Dense>

#include <cmath>
#include <functional>

namespace oracle {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using MetricFn = std::function<Mat(const Vec&)>;
using ScalarFn = std::function<double(const Vec&)>;

inline Vec unit(int n, int i)
{
    return Vec::Unit(n, i);
}

// Fourth-order central difference of a scalar function along axis i.
inline double d1(const ScalarFn& f, const Vec& x, int i, double h = 1e-3)
{
    const Vec e = h * unit(static_cast<int>(x.size()), i);
    return (-f(x + 2 * e) + 8 * f(x + e) - 8 * f(x - e) + f(x - 2 * e)) / (12 * h);
}

// gamma[k](i, j) = Gamma^k_ij from metric derivatives.
inline std::vector<Mat> christoffel(const MetricFn& g, const Vec& x, double h = 1e-3)
{
    const int n = static_cast<int>(x.size());
    std::vector<Mat> dg(n);
    for (int l = 0; l < n; ++l) {
        const Vec e = h * unit(n, l);
        dg[l] = (-g(x + 2 * e) + 8 * g(x + e) - 8 * g(x - e) + g(x - 2 * e)) / (12 * h);
    }
    const Mat ginv = g(x).inverse();
    std::vector<Mat> G(n, Mat::Zero(n, n));
    for (int k = 0; k < n; ++k) {
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                double s = 0.0;
                for (int l = 0; l < n; ++l) {
                    s += ginv(k, l) * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
                }
                G[k](i, j) = 0.5 * s;
            }
        }
    }
    return G;
}

// Laplace-Beltrami with the geometer's sign, -1/sqrt|g| d_i(sqrt|g| g^ij d_j f).
inline double laplacian(const MetricFn& g, const ScalarFn& f, const Vec& x, double h = 1e-3)
{
    const int n = static_cast<int>(x.size());
    double out = 0.0;
    for (int i = 0; i < n; ++i) {
        auto flux = [&](const Vec& y) {
            const Mat gy = g(y);
            const Mat ginv = gy.inverse();
            double s = 0.0;
            for (int j = 0; j < n; ++j) {
                s += ginv(i, j) * d1(f, y, j, h);
            }
            return std::sqrt(gy.determinant()) * s;
        };
        out += d1(flux, x, i, h);
    }
    return -out / std::sqrt(g(x).determinant());
}

// Christoffels of e^{2 rho} g from those of g and the gradient of rho.
inline std::vector<Mat> conformal_christoffel(const std::vector<Mat>& G, const Mat& g,
                                              const Vec& drho)
{
    const int n = static_cast<int>(drho.size());
    const Vec grad = g.inverse() * drho;
    std::vector<Mat> out = G;
    for (int k = 0; k < n; ++k) {
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                out[k](i, j) += (k == i ? drho[j] : 0.0) + (k == j ? drho[i] : 0.0)
                                - g(i, j) * grad[k];
            }
        }
    }
    return out;
}

inline Mat flat_metric(const Vec& x)
{
    return Mat::Identity(x.size(), x.size());
}

inline Mat sphere_metric(const Vec& x)
{
    const double c = 2.0 / (1.0 + x.squaredNorm());
    return c * c * Mat::Identity(x.size(), x.size());
}

} // namespace oracle
