// One PASS/FAIL line per acceptance criterion; nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "biharm/conformal.hpp"
#include "biharm/fields.hpp"
#include "biharm/forms.hpp"
#include "biharm/isoparametric.hpp"
#include "biharm/models.hpp"
#include "biharm/reparam_ode.hpp"
#include "biharm/residual.hpp"
#include "biharm/submersion.hpp"

using namespace biharm;

namespace {

// Pinned tolerances.
constexpr double kRootTol = 1e-12;
constexpr double kConstructionTol = 1e-6;
constexpr double kOrderTarget = 4.0; // error ratio for a halved step at order 2
constexpr double kOrderSlack = 0.2;
constexpr double kVectorTol = 1e-10;
constexpr double kZeroTol = 1e-8;
constexpr double kHandTol = 1e-8;
// C is measured on rho = ln x1 at run time; the bound is safety * C * h^2.
constexpr double kDefectSafety = 2.0;
constexpr double kDualTol = 1e-8;
// Same, relative to max(1, |tau_2|).
constexpr double kOracleSafety = 10.0;
constexpr double kOdeTol = 1e-6;
constexpr double kRk4Order = 4.0;
constexpr double kRk4Slack = 0.5;
constexpr double kPipelineTol = 1e-4;
constexpr double kIsoPass = 1e-8;
constexpr double kIsoFail = 0.1;
constexpr double kTensionTol = 1e-6;
constexpr double kBitensionTol = 1e-3;
constexpr double kRicciTol = 1e-6;
constexpr double kFlatTol = 1e-10;

const FdConfig kAnalytic{1e-4, true};

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what)
    {
        pass = pass && ok;
        if (!detail.empty()) {
            detail += "; ";
        }
        detail += what + (ok ? "" : " [FAILED]");
    }
};

std::string num(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

double vmax(const Vec& v)
{
    return v.size() ? v.cwiseAbs().maxCoeff() : 0.0;
}

std::vector<Point> box(int n, double lo, double hi, int res)
{
    return grid_points(GridSpec{Vec::Constant(n, lo), Vec::Constant(n, hi), res, {}, {}});
}

double max_bigrad(const ConformalChange& cc, const std::vector<Point>& pts, const FdConfig& cfg)
{
    return sweep(cc.base, pts, [&](const Point& x) { return bigrad_residual(cc, x, cfg); }).max_norm;
}

Outcome ansatz_first_family()
{
    Outcome o;
    double worst = 0.0;
    bool count_ok = true;
    for (int n : {3, 5, 6, 7, 10}) {
        const auto r = ansatz_ex1(n);
        const double lo = std::min(-1.0, (n - 2) / 2.0), hi = std::max(-1.0, (n - 2) / 2.0);
        count_ok = count_ok && r.roots.size() == 2;
        if (r.roots.size() == 2) {
            worst = std::max({worst, std::abs(r.roots[0] - lo), std::abs(r.roots[1] - hi)});
        }
    }
    o.require(count_ok, "two roots for n in {3,5,6,7,10}");
    o.require(worst <= kRootTol, "max |root - {-1,(n-2)/2}| = " + num(worst));
    return o;
}

Outcome ansatz_second_family()
{
    Outcome o;
    std::string positive;
    bool disc_ok = true;
    for (int n = 1; n <= 12; ++n) {
        const auto r = ansatz_ex2(n);
        disc_ok = disc_ok && r.discriminant == -7.0 * n * n + 36.0 * n - 28.0;
        if (r.discriminant > 0.0) {
            positive += (positive.empty() ? "" : ",") + std::to_string(n);
        }
    }
    o.require(disc_ok && positive == "1,2,3,4", "positive discriminant for n in {" + positive + "}");
    o.require(ansatz_ex2(2).degenerate_linear, "n=2 degenerate");
    const auto one = ansatz_ex2(1);
    const bool one_ok = one.roots.size() == 2 && std::abs(one.roots[0] - 1.0) <= kRootTol
                        && std::abs(one.roots[1] - 2.0) <= kRootTol;
    o.require(one_ok, "n=1 roots {1,2}");

    // Roots for n = 3 from the bigradient residual of rho = a ln|x| sampled at
    // a in {1, 2, -1}: B_1(e_1) / a is a quadratic in a.
    const auto E = models::euclidean(3);
    const Point x = Vec::Unit(3, 0);
    auto q = [&](double a) {
        return bigrad_residual(ConformalChange{E, fields::radial_log(3, a)}, x, kAnalytic)[0] / a;
    };
    Eigen::Matrix3d V;
    V << 1, 1, 1, 4, 2, 1, 1, -1, 1;
    const Eigen::Vector3d c = V.partialPivLu().solve(Eigen::Vector3d(q(1.0), q(2.0), q(-1.0)));
    const double disc = c[1] * c[1] - 4.0 * c[0] * c[2];
    const auto three = ansatz_ex2(3);
    bool three_ok = disc > 0.0 && three.roots.size() == 2;
    double gap = INFINITY;
    if (three_ok) {
        const double r1 = (-c[1] - std::sqrt(disc)) / (2.0 * c[0]);
        const double r2 = (-c[1] + std::sqrt(disc)) / (2.0 * c[0]);
        gap = std::max(std::abs(std::min(r1, r2) - three.roots[0]),
                       std::abs(std::max(r1, r2) - three.roots[1]));
        three_ok = gap <= 1e-6;
    }
    o.require(three_ok, "n=3 roots " + num(three.roots.empty() ? NAN : three.roots[0]) + ", "
                            + num(three.roots.size() < 2 ? NAN : three.roots[1])
                            + " match the substitution oracle to " + num(gap));
    double flipped = 0.0;
    for (double a : three.roots) {
        flipped = std::max(flipped, std::abs(three.evaluate(-a)));
    }
    o.require(flipped > 1.0, "sign-flipped roots (5+-sqrt17)/2 leave residual " + num(flipped)
                                 + ", so the printed signs are not roots");
    return o;
}

Outcome biharmonic_construction()
{
    Outcome o;
    for (int n : {3, 5}) {
        const ConformalChange cc{models::half_space(n), fields::log_x1(n)};
        const auto pts = box(n, 0.5, 2.0, 5);
        const double analytic = max_bigrad(cc, pts, kAnalytic);
        o.require(analytic <= kConstructionTol,
                  "n=" + std::to_string(n) + " analytic max " + num(analytic));

        const ConformalChange fd{cc.base, cc.rho.fd_only()};
        const double coarse = max_bigrad(fd, pts, FdConfig{1e-2, false});
        const double fine = max_bigrad(fd, pts, FdConfig{5e-3, false});
        const double ratio = coarse / fine;
        o.require(std::abs(ratio - kOrderTarget) <= kOrderSlack * kOrderTarget,
                  "n=" + std::to_string(n) + " fd ratio " + num(ratio) + " (" + num(coarse) + " -> "
                      + num(fine) + ")");
    }
    return o;
}

Outcome counterexample()
{
    Outcome o;
    for (int n : {3, 5, 6}) {
        const ConformalChange cc{models::half_space(n), fields::log_x1(n)};
        const auto t = bigrad_terms(cc, Vec::Ones(n), kAnalytic);
        const Vec e1 = Vec::Unit(n, 0);
        const std::string tag = "n=" + std::to_string(n);
        o.require(vmax(t.grad_of_grad_sq + 2.0 * e1) <= kVectorTol
                      && vmax(t.grad_rho_sq * t.grad_rho - e1) <= kVectorTol,
                  tag + " vectors");
        const Vec fwd = bitension_forward_from_terms(t);
        const Vec rev = bitension_reverse_from_terms(t);
        const auto d = defect_identity_from_terms(t);
        const double id = vmax(d.lhs - d.rhs);
        o.require(id <= kZeroTol && vmax(fwd) <= kZeroTol, tag + " identity " + num(id)
                                                               + ", forward " + num(vmax(fwd)));
        if (n == 6) {
            o.require(vmax(rev) <= kZeroTol && vmax(d.rhs) <= kZeroTol, tag + " reverse vanishes");
        } else {
            o.require(vmax(rev) > kZeroTol && vmax(d.rhs) > kZeroTol,
                      tag + " reverse " + num(vmax(rev)));
        }
    }
    return o;
}

Outcome defect_identity_check()
{
    Outcome o;
    const ConformalChange cc{models::euclidean(3), fields::linear(Vec::Unit(3, 0))};
    const Point origin = Point::Zero(3);
    const Vec e1 = Vec::Unit(3, 0);
    const auto d = defect_identity(cc, origin, kAnalytic);
    const double hand = std::max({vmax(bitension_forward(cc, origin, kAnalytic) - e1),
                                  vmax(bitension_reverse(cc, origin, kAnalytic) - 2.0 * e1),
                                  vmax(d.lhs - 3.0 * e1), vmax(d.rhs - 3.0 * e1)});
    o.require(hand <= kHandTol, "hand values off by " + num(hand));

    const FdConfig cfg{1e-3, false};
    const double h2 = cfg.h * cfg.h;
    double calib = 0.0;
    for (int n : {3, 5}) {
        const ConformalChange cc{models::half_space(n), fields::log_x1(n).fd_only()};
        for (double a : {0.8, 1.2, 1.6}) {
            const auto dd = defect_identity(cc, Point::Constant(n, a), cfg);
            calib = std::max(calib, vmax(dd.lhs - dd.rhs) / h2);
        }
    }
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
        const int n = k < 10 ? 3 : 5;
        const auto rho = fields::Polynomial::random(n, 3, 0.5, 1000 + k).field().fd_only();
        const ConformalChange rc{models::euclidean(n), rho};
        const auto dd = defect_identity(rc, Point::Constant(n, 0.2), cfg);
        worst = std::max(worst, vmax(dd.lhs - dd.rhs));
    }
    const double bound = kDefectSafety * calib * h2;
    o.require(calib > 0.0 && worst <= bound, "C = " + num(calib) + " from ln x1; 20 random cubics "
                                                 + num(worst) + " <= " + num(bound));
    return o;
}

Outcome dual_paths()
{
    Outcome o;
    double worst = 0.0;
    for (int n = 3; n <= 7; ++n) {
        for (int k = 0; k < 4; ++k) {
            const auto rho = fields::Polynomial::random(n, 3, 0.5, 100 * n + k).field();
            const ConformalChange cc{models::euclidean(n), rho};
            const Point x = Point::Constant(n, 0.1 * (k + 1));
            const Vec a = flat(cc.base, bigrad_residual(cc, x, kAnalytic), x).comp;
            worst = std::max(worst, vmax(a - bidif_residual(cc, x, kAnalytic).comp));
        }
    }
    o.require(worst <= kDualTol, "flat(bigrad) vs bidif " + num(worst));

    const FdConfig oracle{1e-3, true};
    const double h2 = oracle.h * oracle.h;
    auto gap = [&](const ConformalChange& cc, const Point& x) {
        const Vec f = bitension_forward(cc, x, kAnalytic);
        return vmax(f - bitension_oracle_fd(cc, x, oracle)) / std::max(1.0, vmax(f));
    };
    double calib = 0.0;
    const ConformalChange log_rho{models::half_space(3), fields::log_x1(3)};
    for (double a : {0.8, 1.2, 1.6}) {
        calib = std::max(calib, gap(log_rho, Point::Constant(3, a)) / h2);
    }
    const double bound = kOracleSafety * calib * h2;
    double worst_oracle = 0.0;
    for (int n = 3; n <= 5; ++n) {
        for (int k = 0; k < 3; ++k) {
            const auto rho = fields::Polynomial::random(n, 3, 0.5, 100 * n + k).field();
            worst_oracle = std::max(worst_oracle, gap(ConformalChange{models::euclidean(n), rho},
                                                      Point::Constant(n, 0.1 * (k + 1))));
        }
    }
    for (int k = 0; k < 5; ++k) {
        const auto rho = fields::Polynomial::random(3, 3, 0.5, 500 + k).field();
        worst_oracle = std::max(worst_oracle, gap(ConformalChange{models::sphere_stereo(3), rho},
                                                  Point::Constant(3, 0.1 * (k + 1))));
    }
    o.require(calib > 0.0 && worst_oracle <= bound,
              "C = " + num(calib) + " from ln x1; forward vs oracle (relative) " + num(worst_oracle)
                  + " <= " + num(bound));
    return o;
}

Outcome ode()
{
    Outcome o;
    const OdeProblem p = ex1_problem(3, -1.0);
    const bool init_ok = p.y0 == 1.0 && p.yp0 == -1.0;
    const auto sol = integrate(p, 1e-3);
    const double ey = std::abs(sol.y_end() - 0.5), er = std::abs(sol.rho_end() - std::log(2.0));
    o.require(init_ok && ey <= kOdeTol && er <= kOdeTol,
              "y(2) error " + num(ey) + ", rho(2) error " + num(er));
    const double c = std::abs(integrate(p, 0.1).y_end() - 0.5);
    const double f = std::abs(integrate(p, 0.05).y_end() - 0.5);
    const double order = observed_order(c, f);
    o.require(std::abs(order - kRk4Order) <= kRk4Slack, "observed order " + num(order));
    return o;
}

Outcome pipeline()
{
    Outcome o;
    const auto pts = grid_points(
        GridSpec{Vec::Constant(3, -2.0), Vec::Constant(3, 2.0), 9, 1.0, 2.0});
    for (double a : ansatz_ex2(3).roots) {
        const auto sol = integrate(ex2_problem(3, a, 0.8, 2.2), 1e-3);
        const ConformalChange cc{models::euclidean(3),
                                 conformal_factor_from_solution(sol, fields::radius(3))};
        const double worst = max_bigrad(cc, pts, FdConfig{1e-4, false});
        o.require(worst <= kPipelineTol, "a=" + num(a) + " max " + num(worst) + " over "
                                              + std::to_string(pts.size()) + " points");
    }
    return o;
}

Outcome isoparametric()
{
    Outcome o;
    const auto E = models::euclidean(3);
    const auto pts = box(3, 0.5, 2.0, 4);
    struct Case {
        std::string name;
        ScalarField f;
        bool expect;
    };
    const std::vector<Case> cases{{"linear", fields::linear((Vec(3) << 1, 2, -1).finished()), true},
                                  {"radius", fields::radius(3), true},
                                  {"x1x2", fields::product_x1x2(3), false}};
    for (const auto& c : cases) {
        const auto col = collinearity_check(E, c.f, pts, kIsoPass, kAnalytic);
        const auto dep = dependence_fit(E, c.f, pts, kIsoPass, kAnalytic);
        const bool agree = col.verdict() == dep.verdict();
        const double worst = std::max({col.gradient_norm.max_defect, col.laplacian.max_defect,
                                       dep.gradient_norm.max_defect, dep.laplacian.max_defect});
        const double strongest = std::max(col.gradient_norm.max_defect, col.laplacian.max_defect);
        if (c.expect) {
            o.require(agree && col.verdict() && worst <= kIsoPass,
                      c.name + " passes, max defect " + num(worst));
        } else {
            o.require(agree && !col.verdict() && strongest >= kIsoFail,
                      c.name + " fails, defect " + num(strongest));
        }
    }
    return o;
}

Outcome submersion()
{
    Outcome o;
    const auto ps = product_submersion(models::euclidean(3), 4);
    const ConformalChange cc{models::euclidean(3), fields::linear(Vec::Unit(3, 0))};
    const auto pts = box(4, -0.5, 0.5, 3);
    const auto rep = reduction_check(ps, cc, pts, FdConfig{1e-4, false}, FdConfig{1e-3, false},
                                     kAnalytic);
    o.require(rep.tension.max_norm <= kTensionTol, "tension " + num(rep.tension.max_norm));
    o.require(rep.bitension.max_norm <= kBitensionTol, "bitension " + num(rep.bitension.max_norm));
    return o;
}

Outcome model_spaces()
{
    Outcome o;
    auto S = models::sphere_stereo(3);
    S.analytic_ricci = {};
    fields::UniformStream u(2024);
    double worst = 0.0;
    for (int k = 0; k < 10; ++k) {
        Point x(3);
        for (int i = 0; i < 3; ++i) {
            x[i] = u.in(-1.5, 1.5);
        }
        worst = std::max(worst, vmax((ricci_operator(S, x, kAnalytic) - 2.0 * Mat::Identity(3, 3))
                                         .reshaped()));
    }
    o.require(worst <= kRicciTol, "S^3 Ricci - 2 Id " + num(worst));

    double flat = 0.0;
    for (int n : {2, 3, 5}) {
        for (bool analytic : {true, false}) {
            auto E = models::euclidean(n);
            if (!analytic) {
                E.analytic_christoffel = {};
                E.analytic_ricci = {};
            }
            const Point x = Point::LinSpaced(n, -0.7, 1.3);
            const auto c = riemann_and_ricci(E, x, kAnalytic);
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < n; ++j) {
                    flat = std::max(flat, vmax(c.apply(Vec::Unit(n, i), Vec::Unit(n, j),
                                                       Vec::Ones(n))));
                }
            }
            flat = std::max(flat, vmax(c.ricci.reshaped()));
        }
    }
    o.require(flat <= kFlatTol, "euclidean curvature " + num(flat));
    return o;
}

} // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"ansatz roots, first family", ansatz_first_family},
        {"ansatz roots, second family", ansatz_second_family},
        {"biharmonic log construction", biharmonic_construction},
        {"one-directional counterexample", counterexample},
        {"defect identity", defect_identity_check},
        {"dual-path equivalence", dual_paths},
        {"reparametrization ODE", ode},
        {"radial end-to-end pipeline", pipeline},
        {"isoparametric checker", isoparametric},
        {"product submersion reduction", submersion},
        {"model spaces", model_spaces},
    };
    int failed = 0;
    int index = 1;
    for (const auto& [name, run] : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = run();
        } catch (const std::exception& e) {
            out.pass = false;
            out.detail = std::string("error: ") + e.what();
        }
        const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
        std::printf("%s %2d %s: %s (%.1fs)\n", out.pass ? "PASS" : "FAIL", index, name.c_str(),
                    out.detail.c_str(), dt.count());
        std::fflush(stdout);
        failed += out.pass ? 0 : 1;
        ++index;
    }
    return failed == 0 ? 0 : 1;
}
