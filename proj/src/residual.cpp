#include "biharm/residual.hpp"

#include <algorithm>
#include <cmath>

namespace biharm {

std::vector<Point> grid_points(const GridSpec& grid)
{
    const auto n = grid.lower.size();
    if (n == 0 || grid.upper.size() != n) {
        throw InvalidArgument("grid extents must be non-empty and of equal length");
    }
    if (grid.resolution < 1) {
        throw InvalidArgument("grid resolution must be at least 1 (empty grid)");
    }
    if (((grid.upper - grid.lower).array() < 0.0).any()) {
        throw InvalidArgument("grid upper extent below lower extent");
    }
    std::vector<Point> points;
    std::vector<int> idx(n, 0);
    const int res = grid.resolution;
    for (;;) {
        Point p(n);
        for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(n); ++i) {
            const double t = res == 1 ? 0.0 : static_cast<double>(idx[i]) / (res - 1);
            p[i] = grid.lower[i] + t * (grid.upper[i] - grid.lower[i]);
        }
        const double r = p.norm();
        const bool keep = (!grid.radius_min || r >= *grid.radius_min - 1e-12)
                          && (!grid.radius_max || r <= *grid.radius_max + 1e-12);
        if (keep) {
            points.push_back(std::move(p));
        }
        int axis = static_cast<int>(n) - 1;
        while (axis >= 0 && ++idx[axis] == res) {
            idx[axis] = 0;
            --axis;
        }
        if (axis < 0) {
            break;
        }
    }
    if (points.empty()) {
        throw InvalidArgument("grid contains no points");
    }
    return points;
}

void check_grid_margin(const ChartManifold& M, const std::vector<Point>& points,
                       const FdConfig& cfg, double widths)
{
    for (const auto& p : points) {
        fd::check_stencil(M.domain, p, cfg, widths);
    }
}

ResidualReport sweep(const ChartManifold& M, const std::vector<Point>& points,
                     const std::function<Vec(const Point&)>& residual, GridSpec grid)
{
    ResidualReport rep;
    rep.grid = std::move(grid);
    rep.points = points;
    rep.residual_vectors.reserve(points.size());
    rep.norms.reserve(points.size());
    for (const auto& p : points) {
        Vec r = residual(p);
        const double nr = norm(M, p, r);
        rep.max_norm = std::max(rep.max_norm, nr);
        rep.residual_vectors.push_back(std::move(r));
        rep.norms.push_back(nr);
    }
    return rep;
}

double observed_order(double coarse_error, double fine_error, double ratio)
{
    return std::log(coarse_error / fine_error) / std::log(ratio);
}

} // namespace biharm
