#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace gmt {

using ParamValue = std::variant<bool, std::int64_t, double, std::string, std::vector<double>>;
using ParamMap = std::map<std::string, ParamValue>;

/// Parses TOML text into flat key/value maps. Top-level scalar and numeric-array keys land
/// under "", each table [name] under "name". Nested tables and mixed arrays are rejected.
std::map<std::string, ParamMap> parse_toml(const std::string& text);
std::map<std::string, ParamMap> parse_toml_file(const std::string& path);

std::string param_to_string(const ParamValue& value);

/// Typed lookups; integers widen to double, a scalar number reads as a one-element list.
double param_double(const ParamMap& params, const std::string& key);
std::int64_t param_int(const ParamMap& params, const std::string& key);
bool param_bool(const ParamMap& params, const std::string& key);
std::string param_string(const ParamMap& params, const std::string& key);
std::vector<double> param_list(const ParamMap& params, const std::string& key);

}  // namespace gmt
