#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "biharm/chart.hpp"

namespace biharm {

/// Tensor-product grid over a box, optionally restricted to a radial shell.
struct GridSpec {
    Vec lower;
    Vec upper;
    int resolution = 0;
    std::optional<double> radius_min;
    std::optional<double> radius_max;
};

/// Grid points in lexicographic order (first coordinate slowest).
/// Throws InvalidArgument when the grid is empty.
std::vector<Point> grid_points(const GridSpec& grid);

/// Throws DomainError unless every point keeps `widths` stencil widths
/// inside the chart domain.
void check_grid_margin(const ChartManifold& M, const std::vector<Point>& points,
                       const FdConfig& cfg, double widths = 4.0);

struct ResidualReport {
    std::vector<Point> points;
    std::vector<Vec> residual_vectors;
    /// h-norm of each residual at its point.
    std::vector<double> norms;
    double max_norm = 0.0;
    GridSpec grid;
    std::optional<double> convergence_order;
};

/// Evaluates `residual` at every point (in order) and records h-norms.
ResidualReport sweep(const ChartManifold& M, const std::vector<Point>& points,
                     const std::function<Vec(const Point&)>& residual, GridSpec grid = {});

/// Observed order p from errors at steps h and h/ratio: log(coarse/fine)/log(ratio).
double observed_order(double coarse_error, double fine_error, double ratio = 2.0);

} // namespace biharm
