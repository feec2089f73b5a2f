#include "explab/varifold.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace explab {

namespace {

double dot3(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

bool in_annulus(double r, double s, double t) { return r >= s && r < t; }

}  // namespace

double RectifiableVarifold::total_mass() const {
  double m = 0.0;
  for (const Atom& a : atoms) m += a.w;
  return m;
}

void validate_varifold(const RectifiableVarifold& T) {
  if (T.dim_n < 1 || T.dim_n > 2 || T.ambient < T.dim_n + 1 || T.ambient > 3) {
    throw std::invalid_argument("varifold dimensions out of supported range");
  }
  for (std::size_t k = 0; k < T.atoms.size(); ++k) {
    const auto& a = T.atoms[k];
    if (!(a.w > 0.0) || !std::isfinite(a.w)) {
      throw std::invalid_argument("atom " + std::to_string(k) +
                                  " has nonpositive or nonfinite weight");
    }
    for (int i = 0; i < T.dim_n; ++i) {
      if (std::abs(dot3(a.frame[i], a.frame[i]) - 1.0) > 1e-10) {
        throw std::invalid_argument("atom " + std::to_string(k) +
                                    " frame vector not unit");
      }
      for (int j = i + 1; j < T.dim_n; ++j) {
        if (std::abs(dot3(a.frame[i], a.frame[j])) > 1e-10) {
          throw std::invalid_argument("atom " + std::to_string(k) +
                                      " frame not orthogonal");
        }
      }
    }
  }
}

double atom_radius(const RectifiableVarifold&,
                   const RectifiableVarifold::Atom& a) {
  return std::sqrt(dot3(a.x, a.x));
}

double atom_transverse_sq(const RectifiableVarifold& T,
                          const RectifiableVarifold::Atom& a) {
  // Explicit projection vector; the |x|^2 - sum <x,e>^2 form cancels
  // catastrophically for almost-tangential positions.
  std::array<double, 3> p = a.x;
  for (int i = 0; i < T.dim_n; ++i) {
    const double c = dot3(a.x, a.frame[i]);
    for (int k = 0; k < 3; ++k) p[k] -= c * a.frame[i][k];
  }
  return dot3(p, p);
}

RectifiableVarifold varifold_from_curve(const PolylineCurve& curve,
                                        Vec2 origin) {
  validate_curve(curve);
  RectifiableVarifold T;
  T.dim_n = 1;
  T.ambient = 2;
  const std::size_t m = curve.edge_count();
  T.atoms.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    const Vec2 v0 = curve.vertices[i];
    const Vec2 v1 = curve.vertices[(i + 1) % curve.vertices.size()];
    const Vec2 mid = 0.5 * (v0 + v1) - origin;
    const double l = dist(v0, v1);
    const Vec2 tan = (v1 - v0) / l;
    RectifiableVarifold::Atom a;
    a.x = {mid.x, mid.y, 0.0};
    a.frame[0] = {tan.x, tan.y, 0.0};
    a.w = l;
    T.atoms.push_back(a);
  }
  return T;
}

RectifiableVarifold sample_plane_disc(double radius, double target_spacing,
                                      std::uint64_t seed) {
  if (!(radius > 0.0) || !(target_spacing > 0.0)) {
    throw std::invalid_argument("radius and spacing must be positive");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  RectifiableVarifold T;
  T.dim_n = 2;
  T.ambient = 3;
  const std::size_t bands =
      static_cast<std::size_t>(std::ceil(radius / target_spacing));
  const double dr = radius / static_cast<double>(bands);
  for (std::size_t j = 0; j < bands; ++j) {
    const double r_in = j * dr, r_out = (j + 1) * dr;
    const double r_mid = 0.5 * (r_in + r_out);
    const double band_area = M_PI * (r_out * r_out - r_in * r_in);
    const std::size_t sectors = std::max<std::size_t>(
        8, static_cast<std::size_t>(std::ceil(2.0 * M_PI * r_mid /
                                              target_spacing)));
    const double jitter = unif(rng) / static_cast<double>(sectors);
    for (std::size_t k = 0; k < sectors; ++k) {
      const double th =
          2.0 * M_PI * ((k + 0.5) / static_cast<double>(sectors) + jitter);
      RectifiableVarifold::Atom a;
      a.x = {r_mid * std::cos(th), r_mid * std::sin(th), 0.0};
      a.frame[0] = {1.0, 0.0, 0.0};
      a.frame[1] = {0.0, 1.0, 0.0};
      a.w = band_area / static_cast<double>(sectors);
      T.atoms.push_back(a);
    }
  }
  return T;
}

RectifiableVarifold sample_cone(double half_angle, double slant_extent,
                                double target_spacing, std::uint64_t seed) {
  if (!(half_angle > 0.0 && half_angle < M_PI / 2.0)) {
    throw std::invalid_argument("cone half-angle must lie in (0, pi/2)");
  }
  if (!(slant_extent > 0.0) || !(target_spacing > 0.0)) {
    throw std::invalid_argument("extent and spacing must be positive");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  RectifiableVarifold T;
  T.dim_n = 2;
  T.ambient = 3;
  const double sb = std::sin(half_angle), cb = std::cos(half_angle);
  const std::size_t bands =
      static_cast<std::size_t>(std::ceil(slant_extent / target_spacing));
  const double dsl = slant_extent / static_cast<double>(bands);
  for (std::size_t j = 0; j < bands; ++j) {
    const double s_in = j * dsl, s_out = (j + 1) * dsl;
    const double s_mid = 0.5 * (s_in + s_out);
    const double band_area = M_PI * sb * (s_out * s_out - s_in * s_in);
    const std::size_t sectors = std::max<std::size_t>(
        8, static_cast<std::size_t>(
               std::ceil(2.0 * M_PI * s_mid * sb / target_spacing)));
    const double jitter = unif(rng) / static_cast<double>(sectors);
    for (std::size_t k = 0; k < sectors; ++k) {
      const double ph =
          2.0 * M_PI * ((k + 0.5) / static_cast<double>(sectors) + jitter);
      const double cph = std::cos(ph), sph = std::sin(ph);
      RectifiableVarifold::Atom a;
      a.x = {s_mid * sb * cph, s_mid * sb * sph, s_mid * cb};
      a.frame[0] = {sb * cph, sb * sph, cb};  // slant direction
      a.frame[1] = {-sph, cph, 0.0};          // azimuthal direction
      a.w = band_area / static_cast<double>(sectors);
      T.atoms.push_back(a);
    }
  }
  return T;
}

RectifiableVarifold sample_sphere(double target_spacing, std::uint64_t seed) {
  if (!(target_spacing > 0.0)) {
    throw std::invalid_argument("spacing must be positive");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  RectifiableVarifold T;
  T.dim_n = 2;
  T.ambient = 3;
  const std::size_t bands = std::max<std::size_t>(
      4, static_cast<std::size_t>(std::ceil(M_PI / target_spacing)));
  const double dphi = M_PI / static_cast<double>(bands);
  for (std::size_t j = 0; j < bands; ++j) {
    const double phi_in = j * dphi, phi_out = (j + 1) * dphi;
    const double phi_mid = 0.5 * (phi_in + phi_out);
    const double band_area = 2.0 * M_PI * (std::cos(phi_in) - std::cos(phi_out));
    const std::size_t sectors = std::max<std::size_t>(
        6, static_cast<std::size_t>(
               std::ceil(2.0 * M_PI * std::sin(phi_mid) / target_spacing)));
    const double jitter = unif(rng) / static_cast<double>(sectors);
    const double sp = std::sin(phi_mid), cp = std::cos(phi_mid);
    for (std::size_t k = 0; k < sectors; ++k) {
      const double th =
          2.0 * M_PI * ((k + 0.5) / static_cast<double>(sectors) + jitter);
      const double ct = std::cos(th), st = std::sin(th);
      RectifiableVarifold::Atom a;
      a.x = {sp * ct, sp * st, cp};
      a.frame[0] = {cp * ct, cp * st, -sp};  // polar direction
      a.frame[1] = {-st, ct, 0.0};           // azimuthal direction
      a.w = band_area / static_cast<double>(sectors);
      T.atoms.push_back(a);
    }
  }
  return T;
}

double mass_in_ball(const RectifiableVarifold& T, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("radius must be positive");
  double m = 0.0;
  for (const auto& a : T.atoms) {
    if (atom_radius(T, a) < t) m += a.w;
  }
  return m;
}

double density_ratio(const RectifiableVarifold& T, double t) {
  return mass_in_ball(T, t) / std::pow(t, T.dim_n);
}

MonotonicitySlack monotonicity_check(const RectifiableVarifold& T, double s,
                                     double t) {
  if (!(s > 0.0 && t > s)) {
    throw std::invalid_argument("need 0 < s < t");
  }
  MonotonicitySlack out;
  out.ratio_s = density_ratio(T, s);
  out.ratio_t = density_ratio(T, t);
  for (const auto& a : T.atoms) {
    const double r = atom_radius(T, a);
    if (!in_annulus(r, s, t)) continue;
    out.transverse_term +=
        a.w * atom_transverse_sq(T, a) / std::pow(r, T.dim_n + 2);
  }
  out.slack = (out.ratio_t - out.ratio_s) - out.transverse_term;
  return out;
}

double cone_deviation(const RectifiableVarifold& T, double s, double t) {
  if (!(s > 0.0 && t > s)) {
    throw std::invalid_argument("need 0 < s < t");
  }
  double energy = 0.0, mass = 0.0;
  for (const auto& a : T.atoms) {
    const double r = atom_radius(T, a);
    if (!in_annulus(r, s, t)) continue;
    energy += a.w * atom_transverse_sq(T, a) / (r * r);
    mass += a.w;
  }
  if (!(mass > 0.0)) {
    throw std::runtime_error("annulus [" + std::to_string(s) + ", " +
                             std::to_string(t) + ") carries no mass");
  }
  return energy / mass;
}

RectifiableVarifold rescale(const RectifiableVarifold& T, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  RectifiableVarifold out = T;
  const double wscale = std::pow(lambda, T.dim_n);
  for (auto& a : out.atoms) {
    for (int i = 0; i < T.ambient; ++i) a.x[i] *= lambda;
    a.w *= wscale;
  }
  return out;
}

std::vector<double> fit_ray_directions(const RectifiableVarifold& T, double s,
                                       double t, double merge_threshold) {
  if (T.dim_n != 1 || T.ambient != 2) {
    throw std::invalid_argument("ray fitting is defined for n=1 in the plane");
  }
  struct Entry {
    double angle, w;
  };
  std::vector<Entry> entries;
  for (const auto& a : T.atoms) {
    const double r = atom_radius(T, a);
    if (!in_annulus(r, s, t)) continue;
    entries.push_back({std::atan2(a.x[1], a.x[0]), a.w});
  }
  if (entries.empty()) {
    throw std::runtime_error("annulus carries no mass; cannot fit rays");
  }
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.angle < b.angle; });

  // Circular single-linkage: split at gaps >= threshold, then merge the last
  // cluster with the first across the branch cut when the wrap gap is small.
  std::vector<std::vector<Entry>> clusters{{entries.front()}};
  for (std::size_t i = 1; i < entries.size(); ++i) {
    if (entries[i].angle - entries[i - 1].angle < merge_threshold) {
      clusters.back().push_back(entries[i]);
    } else {
      clusters.push_back({entries[i]});
    }
  }
  if (clusters.size() > 1) {
    const double wrap_gap =
        entries.front().angle + 2.0 * M_PI - entries.back().angle;
    if (wrap_gap < merge_threshold) {
      for (const Entry& e : clusters.back()) clusters.front().push_back(e);
      clusters.pop_back();
    }
  }

  std::vector<double> rays;
  for (const auto& cluster : clusters) {
    double cx = 0.0, cy = 0.0;
    for (const Entry& e : cluster) {
      cx += e.w * std::cos(e.angle);
      cy += e.w * std::sin(e.angle);
    }
    rays.push_back(std::atan2(cy, cx));
  }
  std::sort(rays.begin(), rays.end());
  return rays;
}

ConeReport cone_report(const RectifiableVarifold& T,
                       const ConeReportOptions& opts) {
  ConeReport rep;
  rep.s = opts.s;
  rep.t = opts.t;
  const MonotonicitySlack mono = monotonicity_check(T, opts.s, opts.t);
  rep.ratio_s = mono.ratio_s;
  rep.ratio_t = mono.ratio_t;
  rep.slack = mono.slack;
  rep.deviation = cone_deviation(T, opts.s, opts.t);
  rep.hypothesis_warning = rep.slack < -opts.tol_cone;
  rep.is_cone = rep.deviation <= opts.tol_cone &&
                std::abs(rep.ratio_t - rep.ratio_s) <=
                    opts.tol_cone * std::abs(rep.ratio_s);
  if (T.dim_n == 1 && T.ambient == 2) {
    rep.rays = fit_ray_directions(T, opts.s, opts.t, opts.merge_threshold);
  }
  return rep;
}

BlowDownResult blow_down_pipeline(const PolylineCurve& curve,
                                  const std::vector<double>& scales,
                                  const ConeReportOptions& opts) {
  if (scales.empty()) throw std::invalid_argument("no scales given");
  for (std::size_t j = 0; j < scales.size(); ++j) {
    if (!(scales[j] > 0.0)) {
      throw std::invalid_argument("scales must be positive");
    }
    if (j > 0 && !(scales[j] < scales[j - 1])) {
      throw std::invalid_argument("scales must be strictly decreasing");
    }
  }
  double max_r = 0.0;
  for (const Vec2& v : curve.vertices) {
    max_r = std::max(max_r, norm(v - curve.p0));
  }
  if (max_r * scales.back() < opts.t) {
    throw std::runtime_error(
        "insufficient extent: curve reaches " + std::to_string(max_r) +
        " but the smallest scale needs " + std::to_string(opts.t /
                                                           scales.back()));
  }

  const RectifiableVarifold base = varifold_from_curve(curve, curve.p0);
  BlowDownResult out;
  out.scales = scales;
  for (double lambda : scales) {
    out.reports.push_back(cone_report(rescale(base, lambda), opts));
  }
  out.limit_rays = out.reports.back().rays;
  return out;
}

void write_varifold_csv(const RectifiableVarifold& T, std::ostream& os) {
  os << "x1";
  for (int i = 1; i < T.ambient; ++i) os << ",x" << i + 1;
  for (int k = 0; k < T.dim_n; ++k) {
    for (int i = 0; i < T.ambient; ++i) {
      os << ",t" << k + 1 << "_" << i + 1;
    }
  }
  os << ",w\n";
  char buf[64];
  for (const auto& a : T.atoms) {
    for (int i = 0; i < T.ambient; ++i) {
      std::snprintf(buf, sizeof buf, i == 0 ? "%.17g" : ",%.17g", a.x[i]);
      os << buf;
    }
    for (int k = 0; k < T.dim_n; ++k) {
      for (int i = 0; i < T.ambient; ++i) {
        std::snprintf(buf, sizeof buf, ",%.17g", a.frame[k][i]);
        os << buf;
      }
    }
    std::snprintf(buf, sizeof buf, ",%.17g\n", a.w);
    os << buf;
  }
}

RectifiableVarifold read_varifold_csv(std::istream& is) {
  std::string header;
  if (!std::getline(is, header)) {
    throw std::runtime_error("empty varifold CSV");
  }
  std::size_t columns = 1;
  for (char c : header) {
    if (c == ',') ++columns;
  }
  RectifiableVarifold T;
  // Column count determines the layout: d + n*d + 1.
  if (columns == 5) {
    T.dim_n = 1;
    T.ambient = 2;
  } else if (columns == 7) {
    T.dim_n = 1;
    T.ambient = 3;
  } else if (columns == 10) {
    T.dim_n = 2;
    T.ambient = 3;
  } else {
    throw std::runtime_error("unrecognized varifold CSV header: " + header);
  }
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::vector<double> vals;
    std::string cell;
    while (std::getline(ss, cell, ',')) vals.push_back(std::stod(cell));
    if (vals.size() != columns) {
      throw std::runtime_error("malformed varifold CSV row: " + line);
    }
    RectifiableVarifold::Atom a;
    std::size_t p = 0;
    for (int i = 0; i < T.ambient; ++i) a.x[i] = vals[p++];
    for (int k = 0; k < T.dim_n; ++k) {
      for (int i = 0; i < T.ambient; ++i) a.frame[k][i] = vals[p++];
    }
    a.w = vals[p];
    T.atoms.push_back(a);
  }
  validate_varifold(T);
  return T;
}

}  // namespace explab
