#pragma once

/// Numerical checks for isoparametric functions:
///   (i)  |df|^2 = gamma o f      <=>  grad |grad f| parallel to grad f
///   (ii) Delta f = sigma o f     <=>  grad Delta f parallel to grad f
/// away from critical points, plus the arclength reparametrization and the
/// level profile (gamma, sigma) along a gradient line.

#include <functional>
#include <optional>
#include <vector>

#include "biharm/forms.hpp"
#include "biharm/interp.hpp"

namespace biharm {

/// Critical-point threshold relative to the coordinate scale.
inline constexpr double kCriticalGradient = 1e-8;

/// Below this h-norm (times the coordinate scale) a tested vector counts as
/// vanishing and its collinearity defect is 0.
inline constexpr double kVanishingFloor = 1e-7;

struct LevelBin {
    double f_mean = 0.0;
    double value_mean = 0.0;
    double spread = 0.0;
    int count = 0;
};

struct CriterionResult {
    /// Per regular point (collinearity) or per bin (dependence fit).
    std::vector<double> defects;
    double max_defect = 0.0;
    bool verdict = false;
    /// Dependence fit without any bin of at least two points.
    bool inconclusive = false;
    /// Fitted profile (dependence fit only): gamma for (i), sigma for (ii).
    std::vector<LevelBin> profile;
    /// Points on levels hit only once, left out of the dependence fit.
    int unbinned = 0;
};

struct IsoparamReport {
    std::vector<Point> points;
    std::vector<Point> skipped_critical;
    double tolerance = 0.0;
    CriterionResult gradient_norm; // criterion (i)
    CriterionResult laplacian;     // criterion (ii)

    bool verdict() const { return gradient_norm.verdict && laplacian.verdict; }
};

/// Criteria (i) and (ii) as collinearity with grad f. The defect of a vector V
/// is |V - (h(V, grad f)/|grad f|^2) grad f| / |V|.
IsoparamReport collinearity_check(const ChartManifold& M, const ScalarField& f,
                                  const std::vector<Point>& points, double tol,
                                  const FdConfig& cfg = {});

/// Criteria (i) and (ii) as functional dependence on f: points binned by f,
/// spread of |df|^2 (resp. Delta f) within each bin compared with tol.
/// Levels of f hit by several points form the bins. When no level repeats,
/// bins of at least min_bin consecutive points are used after removing a
/// linear trend in f.
IsoparamReport dependence_fit(const ChartManifold& M, const ScalarField& f,
                              const std::vector<Point>& points, double tol,
                              const FdConfig& cfg = {}, int min_bin = 5);

/// s(t) = s(t0) + int_{t0}^{t} gamma(u)^{-1/2} du, tabulated with composite
/// Simpson and interpolated by cubic Hermite (exact slopes).
class ArclengthMap {
public:
    ArclengthMap(std::function<double(double)> gamma, double t0, double t1, int intervals = 200,
                 double s_at_t0 = 0.0);

    double operator()(double t) const { return table_(t); }
    double derivative(double t) const;

    const std::vector<double>& t_nodes() const { return t_; }
    const std::vector<double>& s_nodes() const { return s_; }

    /// s o f with analytic gradient s'(f) df.
    ScalarField compose(const ScalarField& f) const;

private:
    std::function<double(double)> gamma_;
    std::vector<double> t_, s_;
    CubicHermite table_;
};

ArclengthMap arclength_reparam(std::function<double(double)> gamma, double t0, double t1,
                               int intervals = 200);

/// max over points of | |d(s o f)|^2 - 1 |, with d(s o f) from finite
/// differences of the composed values.
double unit_speed_defect(const ChartManifold& M, const ScalarField& composed,
                         const std::vector<Point>& points, const FdConfig& cfg = {});

struct LemmaF {
    double F = 0.0;
    OneForm laplace_alpha;
    OneForm alpha;
    /// |Delta alpha - F alpha|_h / |alpha|_h
    double defect = 0.0;
};

/// F = 2 d*alpha + (2-n)|alpha|^2 + (6-n)/2 gamma'(rho) + 2c on an Einstein
/// base with constant c, where |d rho|^2 = gamma(rho).
LemmaF lemma_F(const ConformalChange& cc, const std::function<double(double)>& gamma_prime,
               double einstein_c, const Point& x, const FdConfig& cfg = {});

/// gamma, sigma and sigma' of an arclength-type function s sampled along
/// the normalized gradient line from `seed` (ds/dt = 1 along the line).
struct LevelProfile {
    std::vector<double> s;
    std::vector<double> gamma;
    std::vector<double> sigma;
    std::vector<double> sigma_prime;
    double einstein_c = 0.0;

    double sigma_at(double s) const;
    double sigma_prime_at(double s) const;

private:
    friend LevelProfile sample_level_profile(const ChartManifold&, const ScalarField&,
                                             const Point&, double, int, const FdConfig&);
    CubicHermite sigma_interp_;
};

/// Throws InvalidArgument unless M carries an Einstein constant, and
/// DomainError when the gradient line leaves the chart or hits a critical point.
LevelProfile sample_level_profile(const ChartManifold& M, const ScalarField& s_field,
                                  const Point& seed, double s_end, int samples,
                                  const FdConfig& cfg = {});

} // namespace biharm
