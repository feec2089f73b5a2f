#include "explab/curve_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace explab {

std::filesystem::path sidecar_path(const std::filesystem::path& csv) {
  std::filesystem::path p = csv;
  p.replace_extension(".json");
  return p;
}

void save_curve(const PolylineCurve& curve, const std::filesystem::path& csv,
                double time, bool with_time) {
  std::ofstream os(csv);
  if (!os) throw std::runtime_error("cannot write " + csv.string());
  os << "x,y\n";
  char buf[80];
  for (const Vec2& v : curve.vertices) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", v.x, v.y);
    os << buf;
  }
  nlohmann::json sidecar = {
      {"closed", curve.closed},
      {"p0", {curve.p0.x, curve.p0.y}},
      {"mu", curve.mu},
  };
  if (with_time) sidecar["time"] = time;
  std::ofstream js(sidecar_path(csv));
  if (!js) {
    throw std::runtime_error("cannot write " + sidecar_path(csv).string());
  }
  js << sidecar.dump(2) << "\n";
}

PolylineCurve load_curve(const std::filesystem::path& csv) {
  std::ifstream is(csv);
  if (!is) throw std::runtime_error("cannot read " + csv.string());
  PolylineCurve curve;
  std::string line;
  if (!std::getline(is, line) || line.rfind("x,y", 0) != 0) {
    throw std::runtime_error("curve CSV must start with header 'x,y': " +
                             csv.string());
  }
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw std::runtime_error("malformed curve CSV row: " + line);
    }
    curve.vertices.push_back(
        {std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1))});
  }

  std::ifstream js(sidecar_path(csv));
  if (!js) {
    throw std::runtime_error("missing curve sidecar " +
                             sidecar_path(csv).string());
  }
  nlohmann::json sidecar = nlohmann::json::parse(js);
  curve.closed = sidecar.at("closed").get<bool>();
  curve.p0 = {sidecar.at("p0").at(0).get<double>(),
              sidecar.at("p0").at(1).get<double>()};
  curve.mu = sidecar.at("mu").get<double>();
  validate_curve(curve);
  return curve;
}

}  // namespace explab
