#include "gmt/io.hpp"

#include <fstream>
#include <sstream>

namespace gmt {

MetricOracle metric_for_kind(PointKind kind) {
  switch (kind) {
    case PointKind::euclidean:
      return euclidean_metric();
    case PointKind::linf:
      return linf_metric();
    case PointKind::heisenberg:
      return koranyi_metric();
    case PointKind::cc:
      break;
  }
  throw Error(ErrorKind::usage, "cc targets cannot be rebuilt from a tag alone");
}

Json to_json(const SampledMap& f) {
  Json indices = Json::array();
  Json values = Json::array();
  for (std::size_t i = 0; i < f.size(); ++i) {
    indices.push_back(std::vector<int>(f.index(i).data(), f.index(i).data() + f.index(i).size()));
    values.push_back(std::vector<double>(f.value(i).data(), f.value(i).data() + f.value(i).size()));
  }
  return {{"k", f.k()}, {"h", f.h()}, {"indices", indices}, {"values", values},
          {"target", to_string(f.target().kind)}};
}

SampledMap sampled_map_from_json(const Json& j) {
  try {
    const int k = j.at("k").get<int>();
    const double h = j.at("h").get<double>();
    std::vector<GridIndex> indices;
    for (const auto& row : j.at("indices")) {
      const auto v = row.get<std::vector<int>>();
      indices.push_back(Eigen::Map<const GridIndex>(v.data(), static_cast<Index>(v.size())));
    }
    std::vector<VectorXd> values;
    for (const auto& row : j.at("values")) {
      const auto v = row.get<std::vector<double>>();
      values.push_back(Eigen::Map<const VectorXd>(v.data(), static_cast<Index>(v.size())));
    }
    const PointKind kind = point_kind_from_string(j.at("target").get<std::string>());
    return SampledMap(k, h, std::move(indices), std::move(values), metric_for_kind(kind));
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::io, std::string("sampled map JSON: ") + e.what());
  }
}

Json to_json(const Stratification& s) {
  Json strata = Json::array();
  for (const auto& stratum : s.strata) strata.push_back(stratum);
  return {{"k", s.k}, {"strata", strata}, {"regular", s.regular}, {"unresolved", s.unresolved},
          {"labels", s.labels}};
}

Json to_json(const Cover& c) {
  Json balls = Json::array();
  for (const auto& b : c.balls) {
    balls.push_back({{"center", std::vector<double>(b.center.data(), b.center.data() + b.center.size())},
                     {"radius", b.radius}});
  }
  return {{"s", c.s}, {"content", c.content()}, {"balls", balls}};
}

Json to_json(const HPoint& p) {
  const VectorXd v = p.to_vector();
  return std::vector<double>(v.data(), v.data() + v.size());
}

HPoint hpoint_from_json(const Json& j) {
  const auto v = j.get<std::vector<double>>();
  return HPoint::from_vector(Eigen::Map<const VectorXd>(v.data(), static_cast<Index>(v.size())));
}

std::string content_series_csv(const std::vector<ContentEstimate>& series) {
  std::ostringstream out;
  out.precision(17);
  out << "r,value,ball_count\n";
  for (const auto& e : series) out << e.resolution << ',' << e.value << ',' << e.ball_count << '\n';
  return out.str();
}

std::string profile_csv(const std::vector<ProfileRow>& profile) {
  std::ostringstream out;
  out.precision(17);
  out << "scale,max_ratio\n";
  for (const auto& row : profile) out << row.scale << ',' << row.max_ratio << '\n';
  return out.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::io, "cannot write " + path);
  out << text;
  if (!out) throw Error(ErrorKind::io, "write failed for " + path);
}

}  // namespace gmt
