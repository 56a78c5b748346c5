#include "gmt/config.hpp"

#include "gmt/types.hpp"

#include <fstream>
#include <sstream>
#include <toml.hpp>

namespace gmt {

namespace {

ParamValue convert(const std::string& key, const toml::node& node) {
  if (auto v = node.as_boolean()) return v->get();
  if (auto v = node.as_integer()) return v->get();
  if (auto v = node.as_floating_point()) return v->get();
  if (auto v = node.as_string()) return v->get();
  if (auto arr = node.as_array()) {
    std::vector<double> out;
    for (const auto& item : *arr) {
      if (auto i = item.as_integer()) {
        out.push_back(static_cast<double>(i->get()));
      } else if (auto f = item.as_floating_point()) {
        out.push_back(f->get());
      } else {
        throw Error(ErrorKind::usage, "config key '" + key + "': arrays must be numeric");
      }
    }
    return out;
  }
  throw Error(ErrorKind::usage, "config key '" + key + "': unsupported value type");
}

void fill(ParamMap& out, const toml::table& table, const std::string& prefix) {
  for (const auto& [k, node] : table) {
    const std::string key(k.str());
    if (node.is_table()) {
      throw Error(ErrorKind::usage, "config: nested table '" + prefix + "." + key + "' not supported");
    }
    out[key] = convert(key, node);
  }
}

const ParamValue& lookup(const ParamMap& params, const std::string& key) {
  auto it = params.find(key);
  if (it == params.end()) throw Error(ErrorKind::usage, "missing parameter '" + key + "'");
  return it->second;
}

}  // namespace

std::map<std::string, ParamMap> parse_toml(const std::string& text) {
  toml::table root;
  try {
    root = toml::parse(text);
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << "config: " << e.description() << " at line " << e.source().begin.line;
    throw Error(ErrorKind::usage, msg.str());
  }
  std::map<std::string, ParamMap> out;
  out[""];
  for (const auto& [k, node] : root) {
    const std::string key(k.str());
    if (auto table = node.as_table()) {
      fill(out[key], *table, key);
    } else {
      out[""][key] = convert(key, node);
    }
  }
  return out;
}

std::map<std::string, ParamMap> parse_toml_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot read config " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_toml(buffer.str());
}

std::string param_to_string(const ParamValue& value) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, bool>) {
          return v ? "true" : "false";
        } else if constexpr (std::is_same_v<T, std::string>) {
          return v;
        } else if constexpr (std::is_same_v<T, std::vector<double>>) {
          std::ostringstream s;
          s << '[';
          for (std::size_t i = 0; i < v.size(); ++i) s << (i ? "," : "") << v[i];
          s << ']';
          return s.str();
        } else {
          std::ostringstream s;
          s << v;
          return s.str();
        }
      },
      value);
}

double param_double(const ParamMap& params, const std::string& key) {
  const ParamValue& v = lookup(params, key);
  if (auto d = std::get_if<double>(&v)) return *d;
  if (auto i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
  throw Error(ErrorKind::usage, "parameter '" + key + "' must be a number");
}

std::int64_t param_int(const ParamMap& params, const std::string& key) {
  const ParamValue& v = lookup(params, key);
  if (auto i = std::get_if<std::int64_t>(&v)) return *i;
  throw Error(ErrorKind::usage, "parameter '" + key + "' must be an integer");
}

bool param_bool(const ParamMap& params, const std::string& key) {
  const ParamValue& v = lookup(params, key);
  if (auto b = std::get_if<bool>(&v)) return *b;
  throw Error(ErrorKind::usage, "parameter '" + key + "' must be a boolean");
}

std::string param_string(const ParamMap& params, const std::string& key) {
  const ParamValue& v = lookup(params, key);
  if (auto s = std::get_if<std::string>(&v)) return *s;
  throw Error(ErrorKind::usage, "parameter '" + key + "' must be a string");
}

std::vector<double> param_list(const ParamMap& params, const std::string& key) {
  const ParamValue& v = lookup(params, key);
  if (auto l = std::get_if<std::vector<double>>(&v)) return *l;
  return {param_double(params, key)};
}

}  // namespace gmt
