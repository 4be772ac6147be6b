#include "biharm/experiments/config.hpp"

#include <fstream>
#include <sstream>

#include "biharm/fields.hpp"
#include "biharm/models.hpp"
#include "biharm/reparam_ode.hpp"

namespace biharm::experiments {

namespace {

const std::vector<std::string> kExperimentSections = {
    "residual", "ansatz", "ode", "isoparam", "counterexample-41a", "submersion"};

std::string at(const std::string& where, const char* key)
{
    return where.empty() ? std::string(key) : where + "." + key;
}

} // namespace

Json load_config_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file '" + path + "'");
    }
    Json config;
    try {
        config = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
    }
    validate_top_level(config);
    return config;
}

void validate_top_level(const Json& config)
{
    if (!config.is_object()) {
        throw ConfigError("config must be a JSON object");
    }
    if (!config.contains("schema_version")) {
        throw ConfigError("config is missing 'schema_version'");
    }
    if (!config["schema_version"].is_number_integer()
        || config["schema_version"].get<int>() != kSchemaVersion) {
        throw ConfigError("unsupported schema_version, expected " + std::to_string(kSchemaVersion));
    }
    for (const auto& [key, value] : config.items()) {
        if (key == "schema_version") {
            continue;
        }
        bool known = false;
        for (const auto& name : kExperimentSections) {
            known = known || key == name;
        }
        if (!known) {
            throw ConfigError("unknown config key '" + key + "'");
        }
        if (!value.is_object()) {
            throw ConfigError("config section '" + key + "' must be an object");
        }
    }
}

Json section_of(const Json& config, const std::string& experiment)
{
    if (config.is_object() && config.contains(experiment)) {
        return config[experiment];
    }
    return Json::object();
}

void require_keys(const Json& j, const std::string& where,
                  std::initializer_list<const char*> allowed)
{
    if (!j.is_object()) {
        throw ConfigError("'" + where + "' must be an object");
    }
    for (const auto& [key, value] : j.items()) {
        bool ok = false;
        for (const char* a : allowed) {
            ok = ok || key == a;
        }
        if (!ok) {
            throw ConfigError("unknown key '" + at(where, key.c_str()) + "'");
        }
    }
}

double get_double(const Json& j, const char* key, double fallback, const std::string& where)
{
    if (!j.contains(key)) {
        return fallback;
    }
    if (!j[key].is_number()) {
        throw ConfigError("'" + at(where, key) + "' must be a number");
    }
    return j[key].get<double>();
}

int get_int(const Json& j, const char* key, int fallback, const std::string& where)
{
    if (!j.contains(key)) {
        return fallback;
    }
    if (!j[key].is_number_integer()) {
        throw ConfigError("'" + at(where, key) + "' must be an integer");
    }
    return j[key].get<int>();
}

bool get_bool(const Json& j, const char* key, bool fallback, const std::string& where)
{
    if (!j.contains(key)) {
        return fallback;
    }
    if (!j[key].is_boolean()) {
        throw ConfigError("'" + at(where, key) + "' must be true or false");
    }
    return j[key].get<bool>();
}

std::string get_string(const Json& j, const char* key, const std::string& fallback,
                       const std::string& where)
{
    if (!j.contains(key)) {
        return fallback;
    }
    if (!j[key].is_string()) {
        throw ConfigError("'" + at(where, key) + "' must be a string");
    }
    return j[key].get<std::string>();
}

std::optional<double> get_optional_double(const Json& j, const char* key, const std::string& where)
{
    if (!j.contains(key) || j[key].is_null()) {
        return std::nullopt;
    }
    return get_double(j, key, 0.0, where);
}

ManifoldSpec parse_manifold(const Json& j, const ManifoldSpec& fallback, const std::string& where)
{
    if (j.is_null()) {
        return fallback;
    }
    require_keys(j, where, {"kind", "dim"});
    ManifoldSpec spec;
    spec.kind = get_string(j, "kind", fallback.kind, where);
    spec.dim = get_int(j, "dim", fallback.dim, where);
    if (spec.kind != "euclidean" && spec.kind != "half_space" && spec.kind != "sphere_stereo") {
        throw ConfigError("'" + at(where, "kind")
                          + "' must be euclidean, half_space or sphere_stereo");
    }
    if (spec.dim < 1 || spec.dim > 12) {
        throw ConfigError("'" + at(where, "dim") + "' must be between 1 and 12");
    }
    return spec;
}

ChartManifold build_manifold(const ManifoldSpec& spec)
{
    if (spec.kind == "half_space") {
        return models::half_space(spec.dim);
    }
    if (spec.kind == "sphere_stereo") {
        return models::sphere_stereo(spec.dim);
    }
    return models::euclidean(spec.dim);
}

Json to_json(const ManifoldSpec& spec)
{
    Json j;
    j["kind"] = spec.kind;
    j["dim"] = spec.dim;
    return j;
}

RhoSpec parse_rho(const Json& j, const RhoSpec& fallback, const std::string& where)
{
    if (j.is_null()) {
        return fallback;
    }
    require_keys(j, where,
                 {"preset", "coeffs", "power", "a", "value", "path", "s_field", "seed", "scale",
                  "degree"});
    RhoSpec spec = fallback;
    spec.preset = get_string(j, "preset", fallback.preset, where);
    static const char* presets[] = {"ln_x1",  "linear",   "power",        "radial_ansatz",
                                    "ode_table", "random_cubic", "constant"};
    bool known = false;
    for (const char* p : presets) {
        known = known || spec.preset == p;
    }
    if (!known) {
        throw ConfigError("'" + at(where, "preset")
                          + "' must be one of ln_x1, linear, power, radial_ansatz, ode_table, "
                            "random_cubic, constant");
    }
    if (j.contains("coeffs")) {
        if (!j["coeffs"].is_array()) {
            throw ConfigError("'" + at(where, "coeffs") + "' must be an array of numbers");
        }
        spec.coeffs.clear();
        for (const auto& c : j["coeffs"]) {
            if (!c.is_number()) {
                throw ConfigError("'" + at(where, "coeffs") + "' must be an array of numbers");
            }
            spec.coeffs.push_back(c.get<double>());
        }
    }
    spec.power = j.contains("power") ? get_optional_double(j, "power", where) : fallback.power;
    spec.a = get_double(j, "a", fallback.a, where);
    spec.value = get_double(j, "value", fallback.value, where);
    spec.path = get_string(j, "path", fallback.path, where);
    spec.s_field = get_string(j, "s_field", fallback.s_field, where);
    if (spec.s_field != "radius" && spec.s_field != "x1") {
        throw ConfigError("'" + at(where, "s_field") + "' must be radius or x1");
    }
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned()) {
            throw ConfigError("'" + at(where, "seed") + "' must be a non-negative integer");
        }
        spec.seed = j["seed"].get<std::uint64_t>();
    }
    spec.scale = get_double(j, "scale", fallback.scale, where);
    spec.degree = get_int(j, "degree", fallback.degree, where);
    if (spec.degree < 1 || spec.degree > 6) {
        throw ConfigError("'" + at(where, "degree") + "' must be between 1 and 6");
    }
    if (spec.preset == "ode_table" && spec.path.empty()) {
        throw ConfigError("preset ode_table needs '" + at(where, "path") + "'");
    }
    return spec;
}

namespace {

OdeSolution read_ode_table(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open ODE table '" + path + "'");
    }
    std::string line;
    std::getline(in, line);
    if (line != "s,y,yp,rho") {
        throw ConfigError("ODE table '" + path + "' must start with the header s,y,yp,rho");
    }
    OdeSolution sol;
    int row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) {
            continue;
        }
        std::istringstream ls(line);
        double v[4];
        char comma = 0;
        ls >> v[0] >> comma >> v[1] >> comma >> v[2] >> comma >> v[3];
        if (!ls) {
            throw ConfigError("ODE table '" + path + "' row " + std::to_string(row)
                              + " is malformed");
        }
        sol.s.push_back(v[0]);
        sol.y.push_back(v[1]);
        sol.yp.push_back(v[2]);
        sol.rho.push_back(v[3]);
    }
    if (sol.s.size() < 2) {
        throw ConfigError("ODE table '" + path + "' needs at least two rows");
    }
    return sol;
}

} // namespace

ScalarField build_rho(const RhoSpec& spec, int dim)
{
    if (spec.preset == "ln_x1") {
        return fields::log_x1(dim);
    }
    if (spec.preset == "power") {
        const double p = spec.power ? *spec.power : 2.0 / (2.0 - dim);
        if (!std::isfinite(p)) {
            throw ConfigError("preset power needs an explicit 'power' when dim = 2");
        }
        return fields::log_x1(dim, p);
    }
    if (spec.preset == "linear") {
        Vec c = Vec::Zero(dim);
        if (spec.coeffs.empty()) {
            c[0] = 1.0;
        } else if (static_cast<int>(spec.coeffs.size()) != dim) {
            throw ConfigError("preset linear needs " + std::to_string(dim) + " coefficients");
        } else {
            for (int i = 0; i < dim; ++i) {
                c[i] = spec.coeffs[i];
            }
        }
        return fields::linear(c);
    }
    if (spec.preset == "radial_ansatz") {
        return fields::radial_log(dim, spec.a);
    }
    if (spec.preset == "constant") {
        return fields::constant(dim, spec.value);
    }
    if (spec.preset == "random_cubic") {
        return fields::Polynomial::random(dim, spec.degree, spec.scale, spec.seed).field();
    }
    const OdeSolution sol = read_ode_table(spec.path);
    try {
        const ScalarField s = spec.s_field == "x1" ? fields::linear(Vec::Unit(dim, 0))
                                                   : fields::radius(dim);
        return conformal_factor_from_solution(sol, s);
    } catch (const InvalidArgument& e) {
        throw ConfigError("ODE table '" + spec.path + "': " + e.what());
    }
}

Json to_json(const RhoSpec& spec)
{
    Json j;
    j["preset"] = spec.preset;
    if (spec.preset == "linear") {
        j["coeffs"] = spec.coeffs;
    } else if (spec.preset == "power") {
        j["power"] = spec.power ? Json(*spec.power) : Json(nullptr);
    } else if (spec.preset == "radial_ansatz") {
        j["a"] = spec.a;
    } else if (spec.preset == "constant") {
        j["value"] = spec.value;
    } else if (spec.preset == "ode_table") {
        j["path"] = spec.path;
        j["s_field"] = spec.s_field;
    } else if (spec.preset == "random_cubic") {
        j["seed"] = spec.seed;
        j["scale"] = spec.scale;
        j["degree"] = spec.degree;
    }
    return j;
}

bool rho_is_random(const RhoSpec& spec)
{
    return spec.preset == "random_cubic";
}

namespace {

Vec parse_extent(const Json& j, const char* key, const Vec& fallback, int dim,
                 const std::string& where)
{
    if (!j.contains(key)) {
        if (fallback.size() == dim) {
            return fallback;
        }
        throw ConfigError("'" + at(where, key) + "' is required");
    }
    const Json& v = j[key];
    if (v.is_number()) {
        return Vec::Constant(dim, v.get<double>());
    }
    if (!v.is_array() || static_cast<int>(v.size()) != dim) {
        throw ConfigError("'" + at(where, key) + "' must be a number or an array of "
                          + std::to_string(dim) + " numbers");
    }
    Vec out(dim);
    for (int i = 0; i < dim; ++i) {
        if (!v[i].is_number()) {
            throw ConfigError("'" + at(where, key) + "' must contain numbers only");
        }
        out[i] = v[i].get<double>();
    }
    return out;
}

} // namespace

GridSpec parse_grid(const Json& j, const GridSpec& fallback, int dim, const std::string& where)
{
    GridSpec g = fallback;
    if (g.lower.size() > 0 && g.lower.size() != dim) {
        g.lower = Vec::Constant(dim, g.lower[0]);
        g.upper = Vec::Constant(dim, g.upper[0]);
    }
    if (j.is_null()) {
        return g;
    }
    require_keys(j, where, {"lower", "upper", "resolution", "radius_min", "radius_max"});
    g.lower = parse_extent(j, "lower", g.lower, dim, where);
    g.upper = parse_extent(j, "upper", g.upper, dim, where);
    g.resolution = get_int(j, "resolution", fallback.resolution, where);
    if (j.contains("radius_min")) {
        g.radius_min = get_optional_double(j, "radius_min", where);
    }
    if (j.contains("radius_max")) {
        g.radius_max = get_optional_double(j, "radius_max", where);
    }
    return g;
}

Json to_json(const GridSpec& grid)
{
    Json j;
    j["lower"] = std::vector<double>(grid.lower.data(), grid.lower.data() + grid.lower.size());
    j["upper"] = std::vector<double>(grid.upper.data(), grid.upper.data() + grid.upper.size());
    j["resolution"] = grid.resolution;
    j["radius_min"] = grid.radius_min ? Json(*grid.radius_min) : Json(nullptr);
    j["radius_max"] = grid.radius_max ? Json(*grid.radius_max) : Json(nullptr);
    return j;
}

FdConfig parse_fd(const Json& j, const FdConfig& fallback, const std::string& where)
{
    if (j.is_null()) {
        return fallback;
    }
    require_keys(j, where, {"h", "richardson"});
    FdConfig cfg;
    cfg.h = get_double(j, "h", fallback.h, where);
    cfg.richardson = get_bool(j, "richardson", fallback.richardson, where);
    if (!(cfg.h > 0.0) || cfg.h > 0.1) {
        throw ConfigError("'" + at(where, "h") + "' must be in (0, 0.1]");
    }
    return cfg;
}

Json to_json(const FdConfig& cfg)
{
    Json j;
    j["h"] = cfg.h;
    j["richardson"] = cfg.richardson;
    return j;
}

} // namespace biharm::experiments
