#include "biharm/isoparametric.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "biharm/errors.hpp"

namespace biharm {

namespace {

double coordinate_scale(const Point& x)
{
    return std::max(1.0, x.cwiseAbs().maxCoeff());
}

double orthogonal_defect(const ChartManifold& M, const Point& x, const Vec& V, const Vec& g)
{
    const double nv = norm(M, x, V);
    if (nv <= kVanishingFloor * coordinate_scale(x)) {
        return 0.0;
    }
    const Vec perp = V - (inner(M, x, V, g) / inner(M, x, g, g)) * g;
    return norm(M, x, perp) / nv;
}

void finish(CriterionResult& r, double tol)
{
    r.max_defect = r.defects.empty() ? 0.0 : *std::max_element(r.defects.begin(), r.defects.end());
    r.verdict = !r.inconclusive && r.max_defect <= tol;
}

// Splits points into regular and critical ones.
std::vector<std::size_t> regular_indices(const ChartManifold& M, const ScalarField& f,
                                         const std::vector<Point>& points, const FdConfig& cfg,
                                         IsoparamReport& report)
{
    std::vector<std::size_t> regular;
    for (std::size_t k = 0; k < points.size(); ++k) {
        const Point& x = points[k];
        const Vec g = grad(M, f, x, cfg);
        if (norm(M, x, g) < kCriticalGradient * coordinate_scale(x)) {
            report.skipped_critical.push_back(x);
        } else {
            regular.push_back(k);
        }
    }
    if (regular.empty()) {
        throw InvalidArgument("no regular points: grad f vanishes at every sampled point");
    }
    return regular;
}

struct Sample {
    double f;
    double value;
};

double level_eps(double f)
{
    return 1e-9 * std::max(1.0, std::abs(f));
}

LevelBin summarize(const std::vector<Sample>& bin)
{
    LevelBin out;
    out.count = static_cast<int>(bin.size());
    double fs = 0.0, vs = 0.0;
    for (const Sample& s : bin) {
        fs += s.f;
        vs += s.value;
    }
    out.f_mean = fs / out.count;
    out.value_mean = vs / out.count;

    double sff = 0.0, sfv = 0.0;
    for (const Sample& s : bin) {
        sff += (s.f - out.f_mean) * (s.f - out.f_mean);
        sfv += (s.f - out.f_mean) * (s.value - out.value_mean);
    }
    const double f_range = bin.back().f - bin.front().f;
    const double slope = f_range > level_eps(out.f_mean) && sff > 0.0 ? sfv / sff : 0.0;
    double lo = 0.0, hi = 0.0;
    bool first = true;
    for (const Sample& s : bin) {
        const double r = s.value - out.value_mean - slope * (s.f - out.f_mean);
        lo = first ? r : std::min(lo, r);
        hi = first ? r : std::max(hi, r);
        first = false;
    }
    out.spread = hi - lo;
    return out;
}

CriterionResult fit_profile(std::vector<Sample> samples, double tol, int min_bin)
{
    std::sort(samples.begin(), samples.end(),
              [](const Sample& a, const Sample& b) { return a.f < b.f; });

    std::vector<std::vector<Sample>> levels;
    std::size_t i = 0;
    while (i < samples.size()) {
        std::size_t j = i;
        while (j < samples.size() && samples[j].f - samples[i].f <= level_eps(samples[i].f)) {
            ++j;
        }
        levels.emplace_back(samples.begin() + static_cast<long>(i),
                            samples.begin() + static_cast<long>(j));
        i = j;
    }

    // Repeated levels are bins of their own and single points are left out.
    // Without any repeated level, consecutive levels are merged until each
    // bin holds min_bin points and the spread is taken after a linear fit.
    CriterionResult r;
    std::vector<std::vector<Sample>> bins;
    for (auto& level : levels) {
        if (level.size() >= 2) {
            bins.push_back(std::move(level));
        } else {
            ++r.unbinned;
        }
    }
    if (bins.empty()) {
        r.unbinned = 0;
        std::vector<Sample> current;
        for (const auto& level : levels) {
            current.insert(current.end(), level.begin(), level.end());
            if (static_cast<int>(current.size()) >= min_bin) {
                bins.push_back(std::move(current));
                current.clear();
            }
        }
        if (!current.empty()) {
            if (bins.empty()) {
                bins.push_back(std::move(current));
            } else {
                bins.back().insert(bins.back().end(), current.begin(), current.end());
            }
        }
    }

    for (const auto& bin : bins) {
        if (bin.size() < 2) {
            continue;
        }
        const LevelBin b = summarize(bin);
        r.profile.push_back(b);
        r.defects.push_back(b.spread);
    }
    r.inconclusive = r.profile.empty();
    finish(r, tol);
    return r;
}

} // namespace

IsoparamReport collinearity_check(const ChartManifold& M, const ScalarField& f,
                                  const std::vector<Point>& points, double tol,
                                  const FdConfig& cfg)
{
    IsoparamReport report;
    report.points = points;
    report.tolerance = tol;
    const auto regular = regular_indices(M, f, points, cfg, report);

    ScalarField grad_norm;
    grad_norm.eval = [&](const Point& y) { return norm(M, y, grad(M, f, y, cfg)); };
    const ScalarField lap = laplacian_field(M, f, cfg);

    for (std::size_t k : regular) {
        const Point& x = points[k];
        const Vec g = grad(M, f, x, cfg);
        report.gradient_norm.defects.push_back(
            orthogonal_defect(M, x, grad(M, grad_norm, x, cfg), g));
        report.laplacian.defects.push_back(orthogonal_defect(M, x, grad(M, lap, x, cfg), g));
    }
    finish(report.gradient_norm, tol);
    finish(report.laplacian, tol);
    return report;
}

IsoparamReport dependence_fit(const ChartManifold& M, const ScalarField& f,
                              const std::vector<Point>& points, double tol, const FdConfig& cfg,
                              int min_bin)
{
    if (min_bin < 2) {
        throw InvalidArgument("dependence_fit needs bins of at least two points");
    }
    IsoparamReport report;
    report.points = points;
    report.tolerance = tol;
    const auto regular = regular_indices(M, f, points, cfg, report);

    std::vector<Sample> sq, lap;
    for (std::size_t k : regular) {
        const Point& x = points[k];
        const double fx = f(x);
        const Vec g = grad(M, f, x, cfg);
        sq.push_back({fx, inner(M, x, g, g)});
        lap.push_back({fx, laplacian_scalar(M, f, x, cfg)});
    }
    report.gradient_norm = fit_profile(std::move(sq), tol, min_bin);
    report.laplacian = fit_profile(std::move(lap), tol, min_bin);
    return report;
}

ArclengthMap::ArclengthMap(std::function<double(double)> gamma, double t0, double t1,
                           int intervals, double s_at_t0)
    : gamma_(std::move(gamma))
{
    if (!(t1 > t0) || intervals < 1) {
        throw InvalidArgument("arclength reparametrization needs t0 < t1 and intervals >= 1");
    }
    auto w = [this](double t) {
        const double g = gamma_(t);
        if (!(g > 0.0) || !std::isfinite(g)) {
            throw InvalidArgument("gamma must be positive on the range, got gamma("
                                  + std::to_string(t) + ") = " + std::to_string(g));
        }
        return 1.0 / std::sqrt(g);
    };
    const double dt = (t1 - t0) / intervals;
    std::vector<double> slopes;
    t_.reserve(intervals + 1);
    s_.reserve(intervals + 1);
    double s = s_at_t0;
    for (int k = 0; k <= intervals; ++k) {
        const double t = k == intervals ? t1 : t0 + k * dt;
        if (k > 0) {
            const double a = t_.back();
            s += (t - a) / 6.0 * (slopes.back() + 4.0 * w(0.5 * (a + t)) + w(t));
        }
        t_.push_back(t);
        s_.push_back(s);
        slopes.push_back(w(t));
    }
    table_ = CubicHermite(t_, s_, slopes);
}

double ArclengthMap::derivative(double t) const
{
    locate_interval(t_, t);
    return 1.0 / std::sqrt(gamma_(t));
}

ScalarField ArclengthMap::compose(const ScalarField& f) const
{
    const ArclengthMap self = *this;
    ScalarField out;
    out.eval = [self, f](const Point& x) { return self(f(x)); };
    if (f.analytic_grad) {
        out.analytic_grad = [self, f](const Point& x) {
            return Vec(self.derivative(f(x)) * f.analytic_grad(x));
        };
    }
    return out;
}

ArclengthMap arclength_reparam(std::function<double(double)> gamma, double t0, double t1,
                               int intervals)
{
    return ArclengthMap(std::move(gamma), t0, t1, intervals);
}

double unit_speed_defect(const ChartManifold& M, const ScalarField& composed,
                         const std::vector<Point>& points, const FdConfig& cfg)
{
    const ScalarField s = composed.fd_only();
    double worst = 0.0;
    for (const Point& x : points) {
        const Vec g = grad(M, s, x, cfg);
        worst = std::max(worst, std::abs(inner(M, x, g, g) - 1.0));
    }
    return worst;
}

LemmaF lemma_F(const ConformalChange& cc, const std::function<double(double)>& gamma_prime,
               double einstein_c, const Point& x, const FdConfig& cfg)
{
    const ChartManifold& M = cc.base;
    const double n = cc.n();
    const OneFormField alpha = differential_field(M, cc.rho, cfg);

    LemmaF out;
    out.alpha = OneForm{alpha.value(x)};
    out.laplace_alpha = hodge_laplacian_exact(M, alpha, x, cfg);
    const double a_sq = out.alpha.comp.dot(inverse_metric(M, x) * out.alpha.comp);
    out.F = 2.0 * codifferential(M, alpha, x, cfg) + (2.0 - n) * a_sq
            + 0.5 * (6.0 - n) * gamma_prime(cc.rho(x)) + 2.0 * einstein_c;

    const Mat Ginv = inverse_metric(M, x);
    const Vec diff = out.laplace_alpha.comp - out.F * out.alpha.comp;
    const double a_norm = std::sqrt(a_sq);
    out.defect = a_norm > 0.0 ? std::sqrt(diff.dot(Ginv * diff)) / a_norm : 0.0;
    return out;
}

double LevelProfile::sigma_at(double s_value) const
{
    return sigma_interp_(s_value);
}

double LevelProfile::sigma_prime_at(double s_value) const
{
    return sigma_interp_.derivative(s_value);
}

LevelProfile sample_level_profile(const ChartManifold& M, const ScalarField& s_field,
                                  const Point& seed, double s_end, int samples,
                                  const FdConfig& cfg)
{
    if (!M.einstein_constant) {
        throw InvalidArgument("level profile needs an Einstein base, '" + M.name
                              + "' has no Einstein constant");
    }
    if (samples < 2) {
        throw InvalidArgument("level profile needs at least two samples");
    }
    const double s0 = s_field(seed);
    if (!(s_end != s0)) {
        throw InvalidArgument("level profile needs s_end different from s(seed)");
    }

    // dx/dt = grad s / |grad s|^2, so s(x(t)) = s0 + t.
    auto velocity = [&](const Point& y) {
        if (!M.contains(y)) {
            throw DomainError("gradient line left the chart '" + M.name + "'");
        }
        const Vec g = grad(M, s_field, y, cfg);
        const double g2 = inner(M, y, g, g);
        if (std::sqrt(g2) < kCriticalGradient * coordinate_scale(y)) {
            throw DomainError("gradient line reached a critical point");
        }
        return Vec(g / g2);
    };

    const ScalarField lap = laplacian_field(M, s_field, cfg);
    const int substeps = 8;
    const double ds = (s_end - s0) / (samples - 1);
    const double dt = ds / substeps;

    LevelProfile out;
    out.einstein_c = *M.einstein_constant;
    Point x = seed;
    for (int k = 0; k < samples; ++k) {
        if (k > 0) {
            for (int m = 0; m < substeps; ++m) {
                const Vec k1 = velocity(x);
                const Vec k2 = velocity(x + 0.5 * dt * k1);
                const Vec k3 = velocity(x + 0.5 * dt * k2);
                const Vec k4 = velocity(x + dt * k3);
                x += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            }
        }
        const Vec v = velocity(x);
        const Vec g = grad(M, s_field, x, cfg);
        out.s.push_back(s0 + k * ds);
        out.gamma.push_back(inner(M, x, g, g));
        out.sigma.push_back(lap(x));
        out.sigma_prime.push_back(differential(M, lap, x, cfg).dot(v));
    }
    if (ds < 0.0) {
        std::reverse(out.s.begin(), out.s.end());
        std::reverse(out.gamma.begin(), out.gamma.end());
        std::reverse(out.sigma.begin(), out.sigma.end());
        std::reverse(out.sigma_prime.begin(), out.sigma_prime.end());
    }
    out.sigma_interp_ = CubicHermite(out.s, out.sigma, out.sigma_prime);
    return out;
}

} // namespace biharm
