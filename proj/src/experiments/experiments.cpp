#include "biharm/experiments/experiments.hpp"

#include <algorithm>
#include <cmath>

#include "biharm/conformal.hpp"
#include "biharm/fields.hpp"
#include "biharm/forms.hpp"
#include "biharm/isoparametric.hpp"
#include "biharm/models.hpp"
#include "biharm/reparam_ode.hpp"
#include "biharm/submersion.hpp"

namespace biharm::experiments {

namespace {

Json sub(const Json& j, const char* key)
{
    return j.contains(key) ? j[key] : Json();
}

Json vec_json(const Vec& v)
{
    return std::vector<double>(v.data(), v.data() + v.size());
}

std::string one_of(const Json& j, const char* key, const std::string& fallback,
                   std::initializer_list<const char*> choices, const std::string& where)
{
    const std::string v = get_string(j, key, fallback, where);
    std::string list;
    for (const char* c : choices) {
        if (v == c) {
            return v;
        }
        list += (list.empty() ? "" : ", ") + std::string(c);
    }
    throw ConfigError("'" + where + "." + key + "' must be one of " + list);
}

std::vector<Point> prepare_points(const ChartManifold& M, const GridSpec& grid,
                                  const FdConfig& cfg, const std::string& where)
{
    try {
        std::vector<Point> pts = grid_points(grid);
        check_grid_margin(M, pts, cfg);
        return pts;
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(where + ": " + e.what());
    }
}

double form_norm(const ChartManifold& M, const Point& x, const Vec& a)
{
    return std::sqrt(a.dot(inverse_metric(M, x) * a));
}

void append_point(std::vector<double>& row, const Point& x)
{
    row.insert(row.end(), x.data(), x.data() + x.size());
}

std::vector<std::string> indexed(const std::string& stem, int n)
{
    std::vector<std::string> out;
    for (int i = 1; i <= n; ++i) {
        out.push_back(stem + std::to_string(i));
    }
    return out;
}

} // namespace

RunReport run_residual(const Json& section, const RunOptions& opts)
{
    const std::string w = "residual";
    require_keys(section, w, {"manifold", "rho", "grid", "fd", "path", "expect", "tolerance"});
    const ManifoldSpec ms = parse_manifold(sub(section, "manifold"), {"half_space", 5}, w + ".manifold");
    RhoSpec rs = parse_rho(sub(section, "rho"), RhoSpec{}, w + ".rho");
    if (opts.seed && rho_is_random(rs)) {
        rs.seed = *opts.seed;
    }
    const std::string path = one_of(section, "path", "analytic", {"analytic", "fd"}, w);
    const std::string expect = one_of(section, "expect", "zero", {"zero", "nonzero"}, w);
    const GridSpec grid = parse_grid(sub(section, "grid"),
                                     GridSpec{Vec::Constant(1, 0.5), Vec::Constant(1, 2.0), 5, {}, {}},
                                     ms.dim, w + ".grid");
    const FdConfig fd_default = path == "analytic" ? FdConfig{1e-4, true} : FdConfig{1e-3, false};
    const FdConfig cfg = parse_fd(sub(section, "fd"), fd_default, w + ".fd");
    const double tol = get_double(section, "tolerance", path == "analytic" ? 1e-6 : 1e-4, w);

    const ChartManifold M = build_manifold(ms);
    ScalarField rho = build_rho(rs, ms.dim);
    if (path == "fd") {
        rho = rho.fd_only();
    }
    const ConformalChange cc{M, rho};
    const std::vector<Point> pts = prepare_points(M, grid, cfg, w + ".grid");
    const int n = ms.dim;

    RunReport rep;
    rep.experiment = w;
    rep.config["manifold"] = to_json(ms);
    rep.config["rho"] = to_json(rs);
    rep.config["grid"] = to_json(grid);
    rep.config["fd"] = to_json(cfg);
    rep.config["path"] = path;
    rep.config["expect"] = expect;
    rep.config["tolerance"] = tol;

    rep.csv.header = indexed("x", n);
    for (const auto& h : indexed("bigrad_", n)) {
        rep.csv.header.push_back(h);
    }
    for (const auto& h : indexed("bidif_", n)) {
        rep.csv.header.push_back(h);
    }
    for (const char* h : {"bigrad_norm", "bidif_norm", "consecdif_max", "bitension_norm"}) {
        rep.csv.header.push_back(h);
    }

    double max_bigrad = 0.0, max_bidif = 0.0, max_consec = 0.0, max_bitension = 0.0;
    for (const Point& x : pts) {
        const BigradTerms terms = bigrad_terms(cc, x, cfg);
        const Vec b = bigrad_from_terms(terms);
        const Vec d = bidif_residual(cc, x, cfg).comp;
        const double c = consecdif_residual(cc, x, cfg).max_abs();
        const double bn = norm(M, x, b), dn = form_norm(M, x, d);
        const double tn = n > 2 ? norm(M, x, bitension_forward_from_terms(terms)) : std::nan("");
        max_bigrad = std::max(max_bigrad, bn);
        max_bidif = std::max(max_bidif, dn);
        max_consec = std::max(max_consec, c);
        if (n > 2) {
            max_bitension = std::max(max_bitension, tn);
        }
        std::vector<double> row;
        append_point(row, x);
        append_point(row, b);
        append_point(row, d);
        row.insert(row.end(), {bn, dn, c, tn});
        rep.csv.rows.push_back(std::move(row));
    }

    if (expect == "zero") {
        rep.add_check("bigrad residual vanishes", max_bigrad <= tol, max_bigrad, tol);
        rep.add_check("bidif residual vanishes", max_bidif <= tol, max_bidif, tol);
        rep.add_check("consecdif residual vanishes", max_consec <= tol, max_consec, tol);
    } else {
        rep.add_check("bigrad residual nonzero", max_bigrad > tol, max_bigrad, tol);
        rep.add_check("bidif residual nonzero", max_bidif > tol, max_bidif, tol);
    }
    rep.summary["points"] = pts.size();
    rep.summary["max_bigrad_norm"] = max_bigrad;
    rep.summary["max_bidif_norm"] = max_bidif;
    rep.summary["max_consecdif_abs"] = max_consec;
    rep.summary["max_bitension_forward_norm"] = n > 2 ? Json(max_bitension) : Json(nullptr);
    return rep;
}

RunReport run_ansatz(const Json& section, const RunOptions&)
{
    const std::string w = "ansatz";
    require_keys(section, w, {"family", "n"});
    const std::string family = one_of(section, "family", "ex1", {"ex1", "ex2"}, w);
    const int n = get_int(section, "n", 3, w);
    if (n < 1 || n > 1000) {
        throw ConfigError("'ansatz.n' must be between 1 and 1000");
    }
    const AnsatzFamily fam = family == "ex1" ? AnsatzFamily::ex1 : AnsatzFamily::ex2;
    const AnsatzRoots r = fam == AnsatzFamily::ex1 ? ansatz_ex1(n) : ansatz_ex2(n);

    RunReport rep;
    rep.experiment = w;
    rep.config["family"] = family;
    rep.config["n"] = n;

    Json coeffs;
    coeffs["A"] = r.A;
    coeffs["B"] = r.B;
    coeffs["C"] = r.C;
    rep.summary["coefficients"] = coeffs;
    rep.summary["discriminant"] = r.discriminant;
    rep.summary["degenerate_linear"] = r.degenerate_linear;
    rep.summary["excluded_trivial_root"] =
        r.excluded_trivial_root ? Json(*r.excluded_trivial_root) : Json(nullptr);
    rep.summary["real_root_count"] = r.roots.size();
    if (r.roots.empty()) {
        rep.summary["message"] = "no real roots";
    }

    std::size_t expected_count = 0;
    if (r.degenerate_linear) {
        expected_count = r.roots.size();
    } else if (r.discriminant > 0.0) {
        expected_count = 2;
    } else if (r.discriminant == 0.0) {
        expected_count = 1;
    }
    rep.add_check("root count matches discriminant sign", r.roots.size() == expected_count,
                  static_cast<double>(r.roots.size()), static_cast<double>(expected_count));

    Json roots = Json::array();
    for (double a : r.roots) {
        const double scale = std::max(1.0, std::abs(r.A) * a * a + std::abs(r.B * a) + std::abs(r.C));
        const double q = std::abs(r.evaluate(a));
        Json e;
        e["a"] = a;
        e["quadratic_residual"] = q;
        rep.add_check("quadratic residual a=" + format_csv_number(a), q <= 1e-12 * scale, q,
                      1e-12 * scale);
        if (a == 0.0) {
            e["ode_residual"] = nullptr;
            e["note"] = "trivial solution y = 0";
        } else if (n > 2 || fam == AnsatzFamily::ex1) {
            double worst = 0.0;
            for (double s : {1.0, 1.5, 2.0, 3.0}) {
                worst = std::max(worst, std::abs(ansatz_substitution_residual(n, a, fam, s)));
            }
            e["ode_residual"] = worst;
            rep.add_check("ODE substitution a=" + format_csv_number(a), worst <= 1e-10, worst,
                          1e-10);
        }
        roots.push_back(std::move(e));
    }
    rep.summary["roots"] = std::move(roots);

    if (fam == AnsatzFamily::ex2 && !r.roots.empty()) {
        // Roots with flipped sign: a misprint candidate for this family.
        Json flipped = Json::array();
        for (double a : r.roots) {
            Json e;
            e["a"] = -a;
            e["quadratic_residual"] = std::abs(r.evaluate(-a));
            flipped.push_back(std::move(e));
        }
        rep.summary["sign_flipped_roots"] = std::move(flipped);
    }
    return rep;
}

RunReport run_ode(const Json& section, const RunOptions&)
{
    const std::string w = "ode";
    require_keys(section, w,
                 {"n", "c", "sigma", "s0", "s1", "step", "init", "tolerance", "end_to_end"});
    const int n = get_int(section, "n", 3, w);
    const double c = get_double(section, "c", 0.0, w);
    const std::string sigma = one_of(section, "sigma", "zero", {"zero", "radial"}, w);
    const double s0 = get_double(section, "s0", 1.0, w);
    const double s1 = get_double(section, "s1", 2.0, w);
    const double step = get_double(section, "step", 1e-3, w);
    const double tol = get_double(section, "tolerance", 1e-6, w);
    if (n <= 2 || n > 12) {
        throw ConfigError("'ode.n' must be between 3 and 12");
    }
    if (!(s1 > s0) || (sigma == "radial" && !(s0 > 0.0))) {
        throw ConfigError("'ode' needs s0 < s1, and s0 > 0 for the radial profile");
    }
    if (!(step > 0.0)) {
        throw ConfigError("'ode.step' must be positive");
    }

    const Json init = section.contains("init") ? section["init"] : Json{{"ansatz_root", -1.0}};
    require_keys(init, w + ".init", {"ansatz_root", "y0", "yp0"});
    std::optional<double> root;
    OdeProblem p;
    const AnsatzFamily fam = sigma == "zero" ? AnsatzFamily::ex1 : AnsatzFamily::ex2;
    if (init.contains("ansatz_root")) {
        if (init.contains("y0") || init.contains("yp0")) {
            throw ConfigError("'ode.init' takes either ansatz_root or y0/yp0");
        }
        root = get_double(init, "ansatz_root", 0.0, w + ".init");
        if (*root == 0.0) {
            throw ConfigError("'ode.init.ansatz_root' must be nonzero");
        }
        if (c != 0.0) {
            throw ConfigError("ansatz initial data needs c = 0");
        }
        p = fam == AnsatzFamily::ex1 ? ex1_problem(n, *root, s0, s1)
                                     : ex2_problem(n, *root, s0, s1);
    } else {
        p = fam == AnsatzFamily::ex1 ? ex1_problem(n, 1.0, s0, s1) : ex2_problem(n, 1.0, s0, s1);
        p.y0 = get_double(init, "y0", 0.0, w + ".init");
        p.yp0 = get_double(init, "yp0", 0.0, w + ".init");
    }
    p.c = c;

    const double len = s1 - s0;
    const bool e2e = section.contains("end_to_end") && !section["end_to_end"].is_null();
    GridSpec e2e_grid;
    FdConfig e2e_cfg{1e-4, true};
    double e2e_tol = 1e-4;
    if (e2e) {
        const Json& j = section["end_to_end"];
        const std::string we = w + ".end_to_end";
        require_keys(j, we, {"grid", "fd", "tolerance"});
        GridSpec def;
        if (fam == AnsatzFamily::ex1) {
            def.lower = Vec::Constant(n, -0.5);
            def.upper = Vec::Constant(n, 0.5);
            def.lower[0] = s0 + 0.1 * len;
            def.upper[0] = s1 - 0.1 * len;
            def.resolution = 4;
        } else {
            def.lower = Vec::Constant(n, -(s1 - 0.1 * len));
            def.upper = Vec::Constant(n, s1 - 0.1 * len);
            def.resolution = 9;
            def.radius_min = s0 + 0.1 * len;
            def.radius_max = s1 - 0.1 * len;
        }
        e2e_grid = parse_grid(sub(j, "grid"), def, n, we + ".grid");
        e2e_cfg = parse_fd(sub(j, "fd"), e2e_cfg, we + ".fd");
        e2e_tol = get_double(j, "tolerance", e2e_tol, we);
    }

    RunReport rep;
    rep.experiment = w;
    rep.config["n"] = n;
    rep.config["c"] = c;
    rep.config["sigma"] = sigma;
    rep.config["s0"] = s0;
    rep.config["s1"] = s1;
    rep.config["step"] = step;
    rep.config["init"] = root ? Json{{"ansatz_root", *root}} : Json{{"y0", p.y0}, {"yp0", p.yp0}};
    rep.config["tolerance"] = tol;
    if (e2e) {
        Json j;
        j["grid"] = to_json(e2e_grid);
        j["fd"] = to_json(e2e_cfg);
        j["tolerance"] = e2e_tol;
        rep.config["end_to_end"] = j;
    }

    std::vector<Point> e2e_points;
    ScalarField s_field;
    if (e2e) {
        const ChartManifold M = models::euclidean(n);
        e2e_points = prepare_points(M, e2e_grid, e2e_cfg, w + ".end_to_end.grid");
        s_field = fam == AnsatzFamily::ex1 ? fields::linear(Vec::Unit(n, 0)) : fields::radius(n);
        for (const Point& x : e2e_points) {
            const double reach = 4.0 * e2e_cfg.h * std::max(1.0, x.cwiseAbs().maxCoeff())
                                 * std::sqrt(static_cast<double>(n));
            const double s = s_field(x);
            if (s - reach < s0 || s + reach > s1) {
                throw ConfigError("end-to-end grid point with s = " + std::to_string(s)
                                  + " is too close to the ends of [s0, s1]");
            }
        }
    }

    try {
        p.validate();
    } catch (const InvalidArgument& e) {
        throw ConfigError(std::string("ode: ") + e.what());
    }
    const OdeSolution sol = integrate(p, step);

    rep.csv.header = {"s", "y", "yp", "rho"};
    for (std::size_t k = 0; k < sol.s.size(); ++k) {
        rep.csv.rows.push_back({sol.s[k], sol.y[k], sol.yp[k], sol.rho[k]});
    }

    rep.summary["steps"] = sol.s.size() - 1;
    rep.summary["y_end"] = sol.y_end();
    rep.summary["yp_end"] = sol.yp.back();
    rep.summary["rho_end"] = sol.rho_end();
    rep.summary["max_ode_residual"] = sol.max_residual;
    rep.add_check("solution finite", std::isfinite(sol.max_residual), sol.max_residual,
                  std::nan(""));

    if (root) {
        const AnsatzValue a = ansatz_solution_field(*root, fam, s1);
        const double rho_exact = a.rho - ansatz_solution_field(*root, fam, s0).rho;
        const double ey = std::abs(sol.y_end() - a.y);
        const double er = std::abs(sol.rho_end() - rho_exact);
        rep.summary["y_end_closed_form"] = a.y;
        rep.summary["rho_end_closed_form"] = rho_exact;
        rep.add_check("y(s1) matches closed form", ey <= tol, ey, tol);
        rep.add_check("rho(s1) matches closed form", er <= tol, er, tol);
    } else if (p.y0 == 0.0 && p.yp0 == 0.0) {
        double worst = 0.0;
        for (std::size_t k = 0; k < sol.s.size(); ++k) {
            worst = std::max({worst, std::abs(sol.y[k]), std::abs(sol.rho[k])});
        }
        rep.add_check("trivial solution stays zero", worst == 0.0, worst, 0.0);
    }

    if (e2e) {
        const ChartManifold M = models::euclidean(n);
        const ConformalChange cc{M, conformal_factor_from_solution(sol, s_field)};
        double worst = 0.0;
        for (const Point& x : e2e_points) {
            worst = std::max(worst, norm(M, x, bigrad_residual(cc, x, e2e_cfg)));
        }
        rep.summary["end_to_end_points"] = e2e_points.size();
        rep.summary["end_to_end_max_bigrad_norm"] = worst;
        rep.add_check("end-to-end bigrad residual", worst <= e2e_tol, worst, e2e_tol);
    }
    return rep;
}

namespace {

struct FunctionSpec {
    std::string name;
    std::vector<double> coeffs;
    std::string expect;
};

ScalarField build_function(const FunctionSpec& f, int n)
{
    if (f.name == "linear") {
        Vec c = Vec::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
        if (!f.coeffs.empty()) {
            if (static_cast<int>(f.coeffs.size()) != n) {
                throw ConfigError("isoparam function linear needs " + std::to_string(n)
                                  + " coefficients");
            }
            for (int i = 0; i < n; ++i) {
                c[i] = f.coeffs[i];
            }
        }
        return fields::linear(c);
    }
    if (f.name == "radius") {
        return fields::radius(n);
    }
    if (f.name == "product_x1x2") {
        if (n < 2) {
            throw ConfigError("isoparam function product_x1x2 needs dim >= 2");
        }
        return fields::product_x1x2(n);
    }
    if (f.name == "exp_x1") {
        return fields::exp_x1(n);
    }
    return fields::half_square_norm(n);
}

Json profile_json(const CriterionResult& r)
{
    Json rows = Json::array();
    for (const LevelBin& b : r.profile) {
        Json e;
        e["f"] = b.f_mean;
        e["value"] = b.value_mean;
        e["spread"] = b.spread;
        e["count"] = b.count;
        rows.push_back(std::move(e));
    }
    return rows;
}

Json criterion_json(const CriterionResult& r)
{
    Json j;
    j["max_defect"] = r.max_defect;
    j["verdict"] = r.verdict;
    j["inconclusive"] = r.inconclusive;
    return j;
}

} // namespace

RunReport run_isoparam(const Json& section, const RunOptions&)
{
    const std::string w = "isoparam";
    require_keys(section, w, {"manifold", "grid", "fd", "tolerance", "min_bin", "functions"});
    const ManifoldSpec ms = parse_manifold(sub(section, "manifold"), {"euclidean", 3}, w + ".manifold");
    const GridSpec grid = parse_grid(sub(section, "grid"),
                                     GridSpec{Vec::Constant(1, 0.5), Vec::Constant(1, 2.0), 4, {}, {}},
                                     ms.dim, w + ".grid");
    const FdConfig cfg = parse_fd(sub(section, "fd"), FdConfig{1e-4, true}, w + ".fd");
    const double tol = get_double(section, "tolerance", 1e-8, w);
    const int min_bin = get_int(section, "min_bin", 5, w);
    if (min_bin < 2) {
        throw ConfigError("'isoparam.min_bin' must be at least 2");
    }

    std::vector<FunctionSpec> funcs;
    if (section.contains("functions")) {
        if (!section["functions"].is_array() || section["functions"].empty()) {
            throw ConfigError("'isoparam.functions' must be a non-empty array");
        }
        for (const Json& f : section["functions"]) {
            const std::string wf = w + ".functions[]";
            require_keys(f, wf, {"name", "coeffs", "expect"});
            FunctionSpec spec;
            spec.name = one_of(f, "name", "",
                               {"linear", "radius", "product_x1x2", "exp_x1", "half_square_norm"},
                               wf);
            spec.expect = one_of(f, "expect", "none", {"pass", "fail", "none"}, wf);
            if (f.contains("coeffs")) {
                if (!f["coeffs"].is_array()) {
                    throw ConfigError("'" + wf + ".coeffs' must be an array of numbers");
                }
                for (const Json& c : f["coeffs"]) {
                    if (!c.is_number()) {
                        throw ConfigError("'" + wf + ".coeffs' must be an array of numbers");
                    }
                    spec.coeffs.push_back(c.get<double>());
                }
            }
            funcs.push_back(std::move(spec));
        }
    } else {
        funcs = {{"linear", {}, "pass"}, {"radius", {}, "pass"}, {"product_x1x2", {}, "fail"}};
    }

    const ChartManifold M = build_manifold(ms);
    std::vector<ScalarField> fs;
    for (const auto& f : funcs) {
        fs.push_back(build_function(f, ms.dim));
    }
    const std::vector<Point> pts = prepare_points(M, grid, cfg, w + ".grid");

    RunReport rep;
    rep.experiment = w;
    rep.config["manifold"] = to_json(ms);
    rep.config["grid"] = to_json(grid);
    rep.config["fd"] = to_json(cfg);
    rep.config["tolerance"] = tol;
    rep.config["min_bin"] = min_bin;
    Json fconf = Json::array();
    for (const auto& f : funcs) {
        Json e;
        e["name"] = f.name;
        if (!f.coeffs.empty()) {
            e["coeffs"] = f.coeffs;
        }
        e["expect"] = f.expect;
        fconf.push_back(std::move(e));
    }
    rep.config["functions"] = std::move(fconf);

    rep.csv.header = {"function"};
    for (const auto& h : indexed("x", ms.dim)) {
        rep.csv.header.push_back(h);
    }
    rep.csv.header.push_back("gradient_norm_defect");
    rep.csv.header.push_back("laplacian_defect");

    Json results = Json::array();
    for (std::size_t k = 0; k < funcs.size(); ++k) {
        const std::string& name = funcs[k].name;
        const IsoparamReport col = collinearity_check(M, fs[k], pts, tol, cfg);
        const IsoparamReport dep = dependence_fit(M, fs[k], pts, tol, cfg, min_bin);

        std::size_t r = 0;
        for (const Point& x : pts) {
            const bool skipped = std::any_of(col.skipped_critical.begin(),
                                             col.skipped_critical.end(),
                                             [&](const Point& y) { return y == x; });
            if (skipped) {
                continue;
            }
            std::vector<double> row{static_cast<double>(k)};
            append_point(row, x);
            row.push_back(col.gradient_norm.defects[r]);
            row.push_back(col.laplacian.defects[r]);
            rep.csv.rows.push_back(std::move(row));
            ++r;
        }

        const bool inconclusive = dep.gradient_norm.inconclusive || dep.laplacian.inconclusive;
        if (inconclusive) {
            rep.add_inconclusive(name + ": criteria agree", "dependence fit found no usable bin");
        } else {
            const bool agree = col.gradient_norm.verdict == dep.gradient_norm.verdict
                               && col.laplacian.verdict == dep.laplacian.verdict;
            rep.add_check(name + ": criteria agree", agree, agree ? 1.0 : 0.0, 1.0);
        }
        if (funcs[k].expect != "none") {
            const bool want = funcs[k].expect == "pass";
            const double worst = std::max(col.gradient_norm.max_defect, col.laplacian.max_defect);
            rep.add_check(name + ": isoparametric verdict is " + funcs[k].expect,
                          col.verdict() == want, worst, tol);
        }

        Json e;
        e["function"] = name;
        e["regular_points"] = pts.size() - col.skipped_critical.size();
        e["skipped_critical"] = col.skipped_critical.size();
        Json cj;
        cj["gradient_norm"] = criterion_json(col.gradient_norm);
        cj["laplacian"] = criterion_json(col.laplacian);
        cj["verdict"] = col.verdict();
        e["collinearity"] = std::move(cj);
        Json dj;
        dj["gradient_norm"] = criterion_json(dep.gradient_norm);
        dj["laplacian"] = criterion_json(dep.laplacian);
        dj["verdict"] = dep.verdict();
        dj["unbinned_points"] = dep.gradient_norm.unbinned;
        dj["gamma_profile"] = profile_json(dep.gradient_norm);
        dj["sigma_profile"] = profile_json(dep.laplacian);
        e["dependence_fit"] = std::move(dj);
        results.push_back(std::move(e));
    }
    rep.summary["functions"] = std::move(results);
    return rep;
}

RunReport run_counterexample_41a(const Json& section, const RunOptions&)
{
    const std::string w = "counterexample-41a";
    require_keys(section, w, {"dims", "points", "fd", "tolerance", "zero_tolerance"});
    std::vector<int> dims = {3, 5, 6};
    if (section.contains("dims")) {
        if (!section["dims"].is_array() || section["dims"].empty()) {
            throw ConfigError("'" + w + ".dims' must be a non-empty array of integers");
        }
        dims.clear();
        for (const Json& d : section["dims"]) {
            if (!d.is_number_integer() || d.get<int>() < 3 || d.get<int>() > 12) {
                throw ConfigError("'" + w + ".dims' entries must be integers in 3..12");
            }
            dims.push_back(d.get<int>());
        }
    }
    std::vector<std::vector<double>> points = {{1.0, 1.0, 1.0}, {2.0, 1.0, 1.0}};
    if (section.contains("points")) {
        if (!section["points"].is_array() || section["points"].empty()) {
            throw ConfigError("'" + w + ".points' must be a non-empty array of arrays");
        }
        points.clear();
        for (const Json& p : section["points"]) {
            if (!p.is_array() || p.empty()) {
                throw ConfigError("'" + w + ".points' must be a non-empty array of arrays");
            }
            std::vector<double> v;
            for (const Json& c : p) {
                if (!c.is_number()) {
                    throw ConfigError("'" + w + ".points' must contain numbers only");
                }
                v.push_back(c.get<double>());
            }
            if (!(v[0] > 0.0)) {
                throw ConfigError("'" + w + ".points' need a positive first coordinate");
            }
            points.push_back(std::move(v));
        }
    }
    const FdConfig cfg = parse_fd(sub(section, "fd"), FdConfig{1e-4, true}, w + ".fd");
    const double tol = get_double(section, "tolerance", 1e-10, w);
    const double zero_tol = get_double(section, "zero_tolerance", 1e-8, w);

    RunReport rep;
    rep.experiment = w;
    rep.config["dims"] = dims;
    rep.config["points"] = points;
    rep.config["fd"] = to_json(cfg);
    rep.config["tolerance"] = tol;
    rep.config["zero_tolerance"] = zero_tol;

    Json results = Json::array();
    for (int n : dims) {
        const ConformalChange cc{models::half_space(n), fields::log_x1(n)};
        bool forward_zero = true, reverse_zero = true, reverse_nonzero = true, identity_holds = true;
        double worst_forward = 0.0, worst_identity = 0.0;
        double min_reverse = INFINITY, max_reverse = 0.0;
        Json per_point = Json::array();
        for (const auto& pv : points) {
            Point x = Vec::Ones(n);
            for (int i = 0; i < n && i < static_cast<int>(pv.size()); ++i) {
                x[i] = pv[i];
            }
            const BigradTerms t = bigrad_terms(cc, x, cfg);
            const double x1 = x[0];
            const Vec expect_grad_sq = -2.0 / (x1 * x1 * x1) * Vec::Unit(n, 0);
            const Vec expect_cubic = 1.0 / (x1 * x1 * x1) * Vec::Unit(n, 0);
            const Vec cubic = t.grad_rho_sq * t.grad_rho;
            const double e1 = (t.grad_of_grad_sq - expect_grad_sq).cwiseAbs().maxCoeff();
            const double e2 = (cubic - expect_cubic).cwiseAbs().maxCoeff();
            const std::string where = "n=" + std::to_string(n) + " x1=" + format_csv_number(x1);
            rep.add_check(where + ": grad |grad rho|^2", e1 <= tol, e1, tol);
            rep.add_check(where + ": |grad rho|^2 grad rho", e2 <= tol, e2, tol);

            const Vec fwd = bitension_forward_from_terms(t);
            const Vec rev = bitension_reverse_from_terms(t);
            const DefectIdentity d = defect_identity_from_terms(t);
            const double fn = fwd.cwiseAbs().maxCoeff(), rn = rev.cwiseAbs().maxCoeff();
            const double id = (d.lhs - d.rhs).cwiseAbs().maxCoeff();
            const double dn = d.rhs.cwiseAbs().maxCoeff();
            worst_forward = std::max(worst_forward, fn);
            min_reverse = std::min(min_reverse, std::min(rn, dn));
            max_reverse = std::max(max_reverse, std::max(rn, dn));
            worst_identity = std::max(worst_identity, id);
            forward_zero = forward_zero && fn <= zero_tol;
            reverse_zero = reverse_zero && rn <= zero_tol && dn <= zero_tol;
            reverse_nonzero = reverse_nonzero && rn > zero_tol && dn > zero_tol;
            identity_holds = identity_holds && id <= zero_tol;

            Json e;
            e["x"] = vec_json(x);
            e["grad_grad_rho_sq"] = vec_json(t.grad_of_grad_sq);
            e["grad_rho_sq_grad_rho"] = vec_json(cubic);
            e["bitension_forward"] = vec_json(fwd);
            e["bitension_reverse"] = vec_json(rev);
            e["defect_lhs"] = vec_json(d.lhs);
            e["defect_rhs"] = vec_json(d.rhs);
            per_point.push_back(std::move(e));
        }
        const std::string where = "n=" + std::to_string(n);
        rep.add_check(where + ": defect identity", identity_holds, worst_identity, zero_tol);
        rep.add_check(where + ": forward bitension vanishes", forward_zero, worst_forward, zero_tol);
        std::string verdict;
        if (n == 6) {
            rep.add_check(where + ": reverse bitension vanishes", reverse_zero, max_reverse, zero_tol,
                          "defect term vanishes");
            verdict = "equivalent at n=6";
        } else {
            rep.add_check(where + ": reverse bitension nonzero", reverse_nonzero, min_reverse, zero_tol,
                          "certified by the defect identity");
            verdict = "biharmonic in one direction only";
        }
        Json e;
        e["n"] = n;
        e["verdict"] = verdict;
        e["points"] = std::move(per_point);
        results.push_back(std::move(e));
    }
    rep.summary["dimensions"] = std::move(results);
    return rep;
}

RunReport run_submersion(const Json& section, const RunOptions& opts)
{
    const std::string w = "submersion";
    require_keys(section, w, {"base", "total_dim", "rho", "grid", "fd", "tolerances"});
    const ManifoldSpec ms = parse_manifold(sub(section, "base"), {"euclidean", 3}, w + ".base");
    const int total = get_int(section, "total_dim", ms.dim + 1, w);
    if (total <= ms.dim || total > 12) {
        throw ConfigError("'submersion.total_dim' must exceed the base dimension (at most 12)");
    }
    if (ms.dim <= 2) {
        throw ConfigError("'submersion.base.dim' must be at least 3");
    }
    RhoSpec rdef;
    rdef.preset = "linear";
    RhoSpec rs = parse_rho(sub(section, "rho"), rdef, w + ".rho");
    if (opts.seed && rho_is_random(rs)) {
        rs.seed = *opts.seed;
    }
    const GridSpec grid = parse_grid(sub(section, "grid"),
                                     GridSpec{Vec::Constant(1, -0.5), Vec::Constant(1, 0.5), 3, {}, {}},
                                     total, w + ".grid");

    FdConfig tension_cfg{1e-4, false}, bitension_cfg{1e-3, false}, reference_cfg{1e-4, true};
    if (section.contains("fd")) {
        const Json& f = section["fd"];
        require_keys(f, w + ".fd", {"tension", "bitension", "reference"});
        tension_cfg = parse_fd(sub(f, "tension"), tension_cfg, w + ".fd.tension");
        bitension_cfg = parse_fd(sub(f, "bitension"), bitension_cfg, w + ".fd.bitension");
        reference_cfg = parse_fd(sub(f, "reference"), reference_cfg, w + ".fd.reference");
    }
    double tension_tol = 1e-6, bitension_tol = 1e-3, harmonic_tol = 1e-6, identity_tol = 1e-6;
    if (section.contains("tolerances")) {
        const Json& t = section["tolerances"];
        const std::string wt = w + ".tolerances";
        require_keys(t, wt, {"tension", "bitension", "harmonic", "identity_bitension"});
        tension_tol = get_double(t, "tension", tension_tol, wt);
        bitension_tol = get_double(t, "bitension", bitension_tol, wt);
        harmonic_tol = get_double(t, "harmonic", harmonic_tol, wt);
        identity_tol = get_double(t, "identity_bitension", identity_tol, wt);
    }

    const ProductSubmersion ps = product_submersion(build_manifold(ms), total);
    const ConformalChange cc{ps.base, build_rho(rs, ms.dim)};
    const ChartManifold P = ps.total_space();
    FdConfig widest = bitension_cfg;
    widest.h = std::max({tension_cfg.h, bitension_cfg.h, reference_cfg.h});
    const std::vector<Point> pts = prepare_points(P, grid, widest, w + ".grid");

    RunReport rep;
    rep.experiment = w;
    rep.config["base"] = to_json(ms);
    rep.config["total_dim"] = total;
    rep.config["rho"] = to_json(rs);
    rep.config["grid"] = to_json(grid);
    rep.config["fd"] = Json{{"tension", to_json(tension_cfg)},
                            {"bitension", to_json(bitension_cfg)},
                            {"reference", to_json(reference_cfg)}};
    rep.config["tolerances"] = Json{{"tension", tension_tol},
                                    {"bitension", bitension_tol},
                                    {"harmonic", harmonic_tol},
                                    {"identity_bitension", identity_tol}};

    const ReductionReport red =
        reduction_check(ps, cc, pts, tension_cfg, bitension_cfg, reference_cfg);
    rep.add_check("tension reduction", red.tension.max_norm <= tension_tol, red.tension.max_norm,
                  tension_tol);
    rep.add_check("bitension reduction", red.bitension.max_norm <= bitension_tol,
                  red.bitension.max_norm, bitension_tol,
                  "nested finite differences, tolerance 1000x the tension tolerance");

    double horizontal = 0.0, fiber = 0.0;
    for (const Point& x : pts) {
        horizontal = std::max(horizontal, ps.horizontal_defect(x));
        Point x0 = x;
        x0.tail(ps.fiber_dim()).setZero();
        const Vec a = tension_of_composition(ps, cc, x, tension_cfg);
        const Vec b = tension_of_composition(ps, cc, x0, tension_cfg);
        fiber = std::max(fiber, norm(ps.base, ps.project(x), a - b));
    }
    rep.add_check("horizontal isometry", horizontal <= 1e-12, horizontal, 1e-12);
    rep.add_check("tension constant along fibers", fiber <= tension_tol, fiber, tension_tol);

    const CorollaryVerdict v = corollary_verdict(ps, cc, pts, harmonic_tol, bitension_tol,
                                                 identity_tol, tension_cfg, bitension_cfg,
                                                 reference_cfg);
    rep.add_check("proper biharmonicity agrees", v.consistent(), v.consistent() ? 1.0 : 0.0, 1.0);

    auto status_json = [](const BiharmonicStatus& s) {
        Json j;
        j["max_tension_norm"] = s.max_tension;
        j["max_bitension_norm"] = s.max_bitension;
        j["nonharmonic"] = s.nonharmonic;
        j["biharmonic"] = s.biharmonic;
        return j;
    };
    rep.summary["points"] = pts.size();
    rep.summary["max_tension_difference"] = red.tension.max_norm;
    rep.summary["max_bitension_difference"] = red.bitension.max_norm;
    rep.summary["max_horizontal_defect"] = horizontal;
    rep.summary["max_fiber_variation"] = fiber;
    rep.summary["composition"] = status_json(v.composition);
    rep.summary["identity"] = status_json(v.identity);

    rep.csv.header = indexed("x", total);
    for (const auto& h : indexed("tension_diff_", ms.dim)) {
        rep.csv.header.push_back(h);
    }
    for (const auto& h : indexed("bitension_diff_", ms.dim)) {
        rep.csv.header.push_back(h);
    }
    for (std::size_t k = 0; k < pts.size(); ++k) {
        std::vector<double> row;
        append_point(row, pts[k]);
        append_point(row, red.tension.residual_vectors[k]);
        append_point(row, red.bitension.residual_vectors[k]);
        rep.csv.rows.push_back(std::move(row));
    }
    return rep;
}

const std::vector<std::string>& experiment_names()
{
    static const std::vector<std::string> names = {
        "residual", "ansatz", "ode", "isoparam", "counterexample-41a", "submersion"};
    return names;
}

RunReport run_experiment(const std::string& name, const Json& section, const RunOptions& opts)
{
    if (name == "residual") {
        return run_residual(section, opts);
    }
    if (name == "ansatz") {
        return run_ansatz(section, opts);
    }
    if (name == "ode") {
        return run_ode(section, opts);
    }
    if (name == "isoparam") {
        return run_isoparam(section, opts);
    }
    if (name == "counterexample-41a") {
        return run_counterexample_41a(section, opts);
    }
    if (name == "submersion") {
        return run_submersion(section, opts);
    }
    throw ConfigError("unknown experiment '" + name + "'");
}

} // namespace biharm::experiments
