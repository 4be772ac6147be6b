#include "biharm/submersion.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "biharm/errors.hpp"

namespace biharm {

ProductSubmersion product_submersion(ChartManifold base, int total_dim)
{
    if (base.dim <= 0 || total_dim <= base.dim) {
        throw InvalidArgument("product submersion needs 0 < base dimension < total dimension, got "
                              + std::to_string(base.dim) + " and " + std::to_string(total_dim));
    }
    return ProductSubmersion{std::move(base), total_dim};
}

MapFn ProductSubmersion::projection() const
{
    const int n = base.dim;
    return [n](const Point& x) { return Point(x.head(n)); };
}

ChartManifold ProductSubmersion::total_space() const
{
    const ChartManifold b = base;
    const int n = b.dim, m = total_dim;
    ChartManifold M;
    M.name = b.name + " x R^" + std::to_string(m - n);
    M.dim = m;
    M.metric = [b, n, m](const Point& x) {
        Mat g = Mat::Identity(m, m);
        g.topLeftCorner(n, n) = b.metric(x.head(n));
        return g;
    };
    if (b.domain) {
        M.domain = [b, n](const Point& x) { return b.domain(x.head(n)); };
    }
    if (b.analytic_christoffel) {
        M.analytic_christoffel = [b, n, m](const Point& x) {
            const Christoffel Gb = b.analytic_christoffel(x.head(n));
            Christoffel G(m);
            for (int k = 0; k < n; ++k) {
                for (int i = 0; i < n; ++i) {
                    for (int j = 0; j < n; ++j) {
                        G(k, i, j) = Gb(k, i, j);
                    }
                }
            }
            return G;
        };
    }
    return M;
}

Mat ProductSubmersion::differential() const
{
    Mat d = Mat::Zero(base.dim, total_dim);
    d.leftCols(base.dim).setIdentity();
    return d;
}

double ProductSubmersion::horizontal_defect(const Point& x) const
{
    const int n = base.dim, m = total_dim;
    const Mat g = total_space().metric(x);
    Mat vertical = Mat::Zero(m, m - n);
    vertical.bottomRows(m - n).setIdentity();
    const Mat H = Eigen::FullPivLU<Mat>(vertical.transpose() * g).kernel();

    // g-orthonormal horizontal basis by Gram-Schmidt.
    Mat E(m, H.cols());
    for (Eigen::Index a = 0; a < H.cols(); ++a) {
        Vec v = H.col(a);
        for (Eigen::Index b = 0; b < a; ++b) {
            v -= (E.col(b).dot(g * v)) * E.col(b);
        }
        E.col(a) = v / std::sqrt(v.dot(g * v));
    }
    const Mat dE = differential() * E;
    const Mat gram = dE.transpose() * metric_at(base, project(x)) * dE;
    return (gram - Mat::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
}

namespace {

struct MapJet {
    Point y;
    Mat J;                            // J(k, i) = d_i phi^k
    std::vector<std::vector<Vec>> d2; // d2[i][j] = d_i d_j phi
};

MapJet map_jet(const ChartManifold& source, const MapFn& phi, const Point& x, const FdConfig& cfg)
{
    fd::check_stencil(source.domain, x, cfg);
    const int m = source.dim;
    MapJet jet;
    jet.y = phi(x);
    jet.J = fd::jacobian(phi, x, cfg);
    jet.d2.assign(m, std::vector<Vec>(m));
    for (int i = 0; i < m; ++i) {
        for (int j = i; j < m; ++j) {
            jet.d2[i][j] = fd::second_partial(phi, x, i, j, cfg);
            jet.d2[j][i] = jet.d2[i][j];
        }
    }
    return jet;
}

Mat source_gram(const ChartManifold& source, const Point& x)
{
    const Mat E = orthonormal_frame(source, x);
    return E * E.transpose();
}

} // namespace

Vec map_tension(const ChartManifold& source, const ChartManifold& target, const MapFn& phi,
                const Point& x, const FdConfig& cfg)
{
    const int m = source.dim;
    const MapJet jet = map_jet(source, phi, x, cfg);
    const Christoffel Gs = christoffel(source, x, cfg);
    const Christoffel Gt = christoffel(target, jet.y, cfg);
    const Mat G = source_gram(source, x);

    Vec tau = Vec::Zero(target.dim);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            if (G(i, j) == 0.0) {
                continue;
            }
            Vec term = jet.d2[i][j] + Gt.contract(jet.J.col(i), jet.J.col(j));
            for (int l = 0; l < m; ++l) {
                term -= Gs(l, i, j) * jet.J.col(l);
            }
            tau += G(i, j) * term;
        }
    }
    return tau;
}

Vec map_bitension(const ChartManifold& source, const ChartManifold& target, const MapFn& phi,
                  const Point& x, const FdConfig& cfg)
{
    const int m = source.dim, n = target.dim;
    auto V = [&](const Point& p) { return map_tension(source, target, phi, p, cfg); };

    const MapJet jet = map_jet(source, phi, x, cfg);
    const Vec v = V(x);
    const Mat dV = fd::jacobian(V, x, cfg);
    const Christoffel Gs = christoffel(source, x, cfg);
    const Christoffel Gt = christoffel(target, jet.y, cfg);
    const auto dGt = christoffel_partials(target, jet.y, cfg);

    // D(k, j) = (nabla^phi_{d_j} tau)^k
    Mat D(n, m);
    for (int j = 0; j < m; ++j) {
        D.col(j) = dV.col(j) + Gt.along(jet.J.col(j)) * v;
    }

    const Mat G = source_gram(source, x);
    Vec rough = Vec::Zero(n);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            if (G(i, j) == 0.0) {
                continue;
            }
            Vec dD = fd::second_partial(V, x, i, j, cfg) + Gt.along(jet.d2[i][j]) * v
                     + Gt.along(jet.J.col(j)) * dV.col(i);
            for (int c = 0; c < n; ++c) {
                dD += jet.J(c, i) * (dGt[c].along(jet.J.col(j)) * v);
            }
            Vec term = dD + Gt.along(jet.J.col(i)) * D.col(j);
            for (int l = 0; l < m; ++l) {
                term -= Gs(l, i, j) * D.col(l);
            }
            rough += G(i, j) * term;
        }
    }

    const Riemann Rt = riemann(target, jet.y, cfg);
    const Mat E = orthonormal_frame(source, x);
    Vec curv = Vec::Zero(n);
    for (int a = 0; a < m; ++a) {
        const Vec e = jet.J * E.col(a);
        curv += Rt.apply(e, v, e);
    }
    return rough - curv;
}

namespace {

void check_composition(const ProductSubmersion& ps, const ConformalChange& cc)
{
    if (cc.base.dim != ps.base.dim) {
        throw DimensionError("conformal change and submersion base have different dimensions");
    }
}

} // namespace

Vec tension_of_composition(const ProductSubmersion& ps, const ConformalChange& cc, const Point& x,
                           const FdConfig& cfg)
{
    check_composition(ps, cc);
    return map_tension(ps.total_space(), conformal_metric_manifold(cc), ps.projection(), x, cfg);
}

Vec bitension_of_composition(const ProductSubmersion& ps, const ConformalChange& cc,
                             const Point& x, const FdConfig& cfg)
{
    check_composition(ps, cc);
    return map_bitension(ps.total_space(), conformal_metric_manifold(cc), ps.projection(), x,
                         cfg);
}

namespace {

ResidualReport base_norm_sweep(const ProductSubmersion& ps, const std::vector<Point>& points,
                               const std::function<Vec(const Point&)>& residual)
{
    ResidualReport rep;
    rep.points = points;
    for (const Point& x : points) {
        Vec r = residual(x);
        const double nr = norm(ps.base, ps.project(x), r);
        rep.max_norm = std::max(rep.max_norm, nr);
        rep.residual_vectors.push_back(std::move(r));
        rep.norms.push_back(nr);
    }
    return rep;
}

} // namespace

ReductionReport reduction_check(const ProductSubmersion& ps, const ConformalChange& cc,
                                const std::vector<Point>& points, const FdConfig& tension_cfg,
                                const FdConfig& bitension_cfg, const FdConfig& reference_cfg)
{
    check_composition(ps, cc);
    ReductionReport out;
    out.tension = base_norm_sweep(ps, points, [&](const Point& x) {
        return Vec(tension_of_composition(ps, cc, x, tension_cfg)
                   - tension_forward(cc, ps.project(x), reference_cfg));
    });
    out.bitension = base_norm_sweep(ps, points, [&](const Point& x) {
        return Vec(bitension_of_composition(ps, cc, x, bitension_cfg)
                   - bitension_forward(cc, ps.project(x), reference_cfg));
    });
    return out;
}

CorollaryVerdict corollary_verdict(const ProductSubmersion& ps, const ConformalChange& cc,
                                   const std::vector<Point>& points, double harmonic_tol,
                                   double composition_bitension_tol,
                                   double identity_bitension_tol, const FdConfig& tension_cfg,
                                   const FdConfig& bitension_cfg, const FdConfig& reference_cfg)
{
    check_composition(ps, cc);
    CorollaryVerdict out;
    for (const Point& x : points) {
        const Point y = ps.project(x);
        auto& c = out.composition;
        c.max_tension = std::max(c.max_tension,
                                 norm(ps.base, y, tension_of_composition(ps, cc, x, tension_cfg)));
        c.max_bitension = std::max(
            c.max_bitension, norm(ps.base, y, bitension_of_composition(ps, cc, x, bitension_cfg)));
        auto& i = out.identity;
        i.max_tension =
            std::max(i.max_tension, norm(ps.base, y, tension_forward(cc, y, reference_cfg)));
        i.max_bitension =
            std::max(i.max_bitension, norm(ps.base, y, bitension_forward(cc, y, reference_cfg)));
    }
    for (auto* s : {&out.composition, &out.identity}) {
        s->nonharmonic = s->max_tension > harmonic_tol;
    }
    out.composition.biharmonic = out.composition.max_bitension <= composition_bitension_tol;
    out.identity.biharmonic = out.identity.max_bitension <= identity_bitension_tol;
    return out;
}

} // namespace biharm
