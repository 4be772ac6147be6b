#pragma once

/// JSON experiment configuration. A config file holds a schema version and
/// one optional section per experiment; every section has documented
/// defaults and unknown keys are rejected.

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "biharm/chart.hpp"
#include "biharm/residual.hpp"

namespace biharm::experiments {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// Invalid configuration; maps to exit code 2.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Reads and checks a config file: an object with "schema_version" and
/// experiment sections only.
Json load_config_file(const std::string& path);
void validate_top_level(const Json& config);

/// Section for `experiment` from a loaded config, or an empty object.
Json section_of(const Json& config, const std::string& experiment);

/// Throws ConfigError when `j` is not an object or has keys outside `allowed`.
void require_keys(const Json& j, const std::string& where,
                  std::initializer_list<const char*> allowed);

double get_double(const Json& j, const char* key, double fallback, const std::string& where);
int get_int(const Json& j, const char* key, int fallback, const std::string& where);
bool get_bool(const Json& j, const char* key, bool fallback, const std::string& where);
std::string get_string(const Json& j, const char* key, const std::string& fallback,
                       const std::string& where);
std::optional<double> get_optional_double(const Json& j, const char* key,
                                          const std::string& where);

struct ManifoldSpec {
    std::string kind = "euclidean";
    int dim = 3;
};

ManifoldSpec parse_manifold(const Json& j, const ManifoldSpec& fallback, const std::string& where);
ChartManifold build_manifold(const ManifoldSpec& spec);
Json to_json(const ManifoldSpec& spec);

struct RhoSpec {
    std::string preset = "ln_x1";
    std::vector<double> coeffs;
    std::optional<double> power;
    double a = 1.0;
    double value = 0.0;
    std::string path;
    std::string s_field = "radius";
    std::uint64_t seed = 1;
    double scale = 0.5;
    int degree = 3;
};

RhoSpec parse_rho(const Json& j, const RhoSpec& fallback, const std::string& where);
/// Throws ConfigError for unusable parameters (wrong coefficient count,
/// unreadable table).
ScalarField build_rho(const RhoSpec& spec, int dim);
Json to_json(const RhoSpec& spec);
bool rho_is_random(const RhoSpec& spec);

/// Grid extents may be a number (same for every axis) or a per-axis array.
GridSpec parse_grid(const Json& j, const GridSpec& fallback, int dim, const std::string& where);
Json to_json(const GridSpec& grid);

/// {"h": ..., "richardson": ...}
FdConfig parse_fd(const Json& j, const FdConfig& fallback, const std::string& where);
Json to_json(const FdConfig& cfg);

} // namespace biharm::experiments
