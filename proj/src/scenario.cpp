#include "explab/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <thread>
#include <vector>

#include "explab/ball.hpp"
#include "explab/curve_io.hpp"
#include "explab/expander.hpp"
#include "explab/flow.hpp"
#include "explab/monotonicity.hpp"
#include "explab/report_io.hpp"
#include "explab/varifold.hpp"

namespace explab {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

double get_or(const json& j, const char* key, double fallback) {
  return j.contains(key) ? j.at(key).get<double>() : fallback;
}

std::size_t get_or_size(const json& j, const char* key, std::size_t fallback) {
  return j.contains(key) ? j.at(key).get<std::size_t>() : fallback;
}

Vec2 vec2_from(const json& j) {
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << text;
}

void write_json_file(const fs::path& path, const json& j) {
  write_text(path, j.dump(2) + "\n");
}

VerifyOptions options_from(const json& config, double tol_scale) {
  if (!(tol_scale > 0.0)) {
    throw std::invalid_argument("tol-scale must be positive");
  }
  VerifyOptions opts;
  if (config.contains("tolerances")) {
    const json& t = config.at("tolerances");
    opts.tol_slack = get_or(t, "tol_slack", opts.tol_slack);
    opts.tol_eq = get_or(t, "tol_eq", opts.tol_eq);
    if (t.contains("tol_defect")) opts.tol_defect = t.at("tol_defect");
    opts.simpson_nodes =
        static_cast<int>(get_or(t, "simpson_nodes", opts.simpson_nodes));
  }
  if (!(opts.tol_slack > 0.0) || !(opts.tol_eq > 0.0) ||
      (opts.tol_defect && !(*opts.tol_defect > 0.0))) {
    throw std::invalid_argument("tolerances must be positive");
  }
  opts.tol_slack *= tol_scale;
  opts.tol_eq *= tol_scale;
  return opts;
}

int exit_from_verdict(Verdict v) {
  switch (v) {
    case Verdict::holds:
    case Verdict::equality:
      return kExitOk;
    case Verdict::violated:
      return kExitViolation;
    case Verdict::hypothesis_unmet:
      return kExitHypothesisUnmet;
  }
  return kExitConfigError;
}

json envelope(const std::string& kind, const json& config) {
  return {{"scenario", kind},
          {"config_hash", config_hash(config)},
          {"weighting_note", kWeightingNote}};
}

std::string summary_for_report(const VerificationReport& rep) {
  char buf[256];
  std::string s = "claim " + rep.claim + ": verdict " + to_string(rep.verdict);
  std::snprintf(buf, sizeof buf,
                "\nworst slack %.6e (tol_slack %.3e, tol_eq %.3e)"
                "\ndefect min %.6e (tol %.3e)\n",
                rep.worst_slack, rep.tol_slack, rep.tol_eq,
                rep.hypothesis.defect_min, rep.hypothesis.defect_tol);
  s += buf;
  if (rep.hypothesis.laplace_margin_min) {
    std::snprintf(buf, sizeof buf, "laplace margin min %.6e\n",
                  *rep.hypothesis.laplace_margin_min);
    s += buf;
  }
  return s;
}

int run_verify(const std::string& claim, const json& config,
               const fs::path& out, double tol_scale) {
  const PolylineCurve curve = curve_from_config(config);
  const std::vector<double> grid =
      config.at("grid").get<std::vector<double>>();
  const VerifyOptions opts = options_from(config, tol_scale);

  VerificationReport rep;
  ScalarField field = field_from_config(curve, config);
  if (claim == "thm13") {
    rep = verify_theorem13(curve, field, grid, opts);
  } else if (claim == "cor22") {
    rep = verify_corollary22(curve, field, get_or(config, "lambda", 0.0),
                             config.at("R0").get<double>(), grid, opts);
  } else {
    rep = verify_corollary23(curve, grid, opts);
  }

  json out_json = envelope("verify-" + claim, config);
  out_json["report"] = report_to_json(rep);

  if (config.contains("mean_value")) {
    const json& mv = config.at("mean_value");
    const MeanValueBound b =
        mean_value_bound(curve, field, get_or(mv, "lambda", 0.0),
                         mv.at("R0").get<double>());
    out_json["mean_value"] = {{"bound", b.bound},
                              {"f_at_p0", b.f_at_p0},
                              {"satisfied", b.satisfied}};
  }

  write_json_file(out / "report.json", out_json);
  {
    std::ofstream os(out / "report.csv");
    write_report_csv(rep, os);
  }
  {
    const RadialProfile profile =
        build_radial_profile(curve, field, curve.p0, grid);
    std::ofstream os(out / "profile.csv");
    write_radial_profile_csv(profile, os);
  }
  write_text(out / "summary.txt", summary_for_report(rep));
  return exit_from_verdict(rep.verdict);
}

int run_gen_expander(const json& config, const fs::path& out) {
  ExpanderShootingProblem p;
  p.mu = get_or(config, "mu", 1.0);
  p.b = get_or(config, "b", 1.0);
  p.ds = get_or(config, "ds", 1e-3);
  p.s_max = get_or(config, "s_max", 20.0);
  const PolylineCurve curve = integrate_expander(p);
  const AsymptoticAngle angle = asymptotic_angle(curve);
  const DefectSummary defect = classify_expander_type(curve);

  save_curve(curve, out / "curve.csv");
  json out_json = envelope("gen-expander", config);
  out_json["result"] = {{"vertices", curve.vertices.size()},
                        {"theta_inf", angle.angle},
                        {"theta_uncertainty", angle.uncertainty},
                        {"defect_min", defect.min_defect},
                        {"defect_max_abs", defect.max_abs},
                        {"expander_type", defect.expander_type}};
  write_json_file(out / "report.json", out_json);
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "expander mu=%g b=%g: %zu vertices, theta_inf %.8f "
                "(+-%.2e), max |defect| %.3e\n",
                p.mu, p.b, curve.vertices.size(), angle.angle,
                angle.uncertainty, defect.max_abs);
  write_text(out / "summary.txt", buf);
  return kExitOk;
}

int run_flow(const json& config, const fs::path& out) {
  PolylineCurve curve = curve_from_config(config);
  const double t0 = get_or(config, "t0", curve.mu > 0.0
                                             ? 1.0 / (2.0 * curve.mu)
                                             : 0.0);
  const double t1 = config.at("t1").get<double>();
  const double cfl = get_or(config, "cfl", 0.2);
  const std::string boundary_name =
      config.contains("boundary") ? config.at("boundary").get<std::string>()
                                  : "pinned_exact";
  BoundaryPolicy boundary;
  if (boundary_name == "pinned_exact") {
    boundary = BoundaryPolicy::pinned_exact;
  } else if (boundary_name == "pinned_fixed") {
    boundary = BoundaryPolicy::pinned_fixed;
  } else {
    throw std::invalid_argument("unknown boundary policy " + boundary_name);
  }
  double min_l = std::numeric_limits<double>::infinity();
  for (double l : edge_lengths(curve)) min_l = std::min(min_l, l);
  // Default step keeps headroom under the CFL bound so edges may shrink
  // during the flow without tripping the guard.
  const double dt = get_or(config, "dt", 0.5 * cfl * min_l * min_l);
  const std::size_t snapshot_every = get_or_size(config, "snapshot_every", 0);

  const bool have_reference =
      curve.mu > 0.0 && boundary == BoundaryPolicy::pinned_exact && t0 > 0.0;
  const PolylineCurve initial = curve;

  // Inner-window error against the dilation trajectory of the initial data.
  auto window_error = [&](const PolylineCurve& c, double t) {
    const PolylineCurve ref =
        exact_selfsimilar(initial, 1.0 / (2.0 * t0), initial.p0, t);
    const std::vector<double> s = cumulative_arclength(c);
    std::vector<Vec2> inner;
    for (std::size_t i = 0; i < c.vertices.size(); ++i) {
      const double frac = s[i] / s.back();
      if (frac >= 0.1 && frac <= 0.9) inner.push_back(c.vertices[i]);
    }
    return one_sided_hausdorff(inner, ref);
  };

  FlowState state = make_flow_state(curve, t0, dt, cfl, boundary);
  std::size_t step = 0, snapshot = 0;
  json error_series = json::array();
  auto maybe_emit = [&](const FlowState& st, bool force) {
    if (!force && (snapshot_every == 0 || step % snapshot_every != 0)) return;
    char name[64];
    std::snprintf(name, sizeof name, "curve_%06zu.csv", snapshot++);
    save_curve(st.curve, out / name, st.t, true);
    if (have_reference) {
      error_series.push_back({st.t, window_error(st.curve, st.t)});
    }
  };
  maybe_emit(state, true);
  state = run_flow(state, t1, [&](const FlowState& st) {
    ++step;
    maybe_emit(st, false);
  });
  maybe_emit(state, true);

  json out_json = envelope("flow", config);
  out_json["result"] = {{"t0", t0},
                        {"t1", state.t},
                        {"steps", step},
                        {"dt", dt},
                        {"boundary", boundary_name},
                        {"snapshots", snapshot}};
  if (have_reference) {
    out_json["result"]["final_error"] = window_error(state.curve, state.t);
    out_json["result"]["error_series"] = error_series;
  }
  write_json_file(out / "report.json", out_json);
  char buf[256];
  std::snprintf(buf, sizeof buf, "flow t %.6g -> %.6g in %zu steps (dt %.3e)\n",
                t0, state.t, step, dt);
  std::string summary = buf;
  if (have_reference) {
    std::snprintf(buf, sizeof buf, "inner-window error vs dilation: %.6e\n",
                  out_json["result"]["final_error"].get<double>());
    summary += buf;
  }
  write_text(out / "summary.txt", summary);
  return kExitOk;
}

int run_blow_down(const json& config, const fs::path& out, double tol_scale) {
  const PolylineCurve curve = curve_from_config(config);
  std::vector<double> scales;
  if (config.contains("scales")) {
    scales = config.at("scales").get<std::vector<double>>();
  } else {
    const std::size_t count = get_or_size(config, "pow2_scales", 7);
    for (std::size_t j = 0; j < count; ++j) {
      scales.push_back(std::pow(2.0, -static_cast<double>(j)));
    }
  }
  ConeReportOptions opts;
  if (config.contains("annulus")) {
    opts.s = config.at("annulus").at(0).get<double>();
    opts.t = config.at("annulus").at(1).get<double>();
  }
  opts.tol_cone = get_or(config, "tol_cone", opts.tol_cone) * tol_scale;
  opts.merge_threshold = get_or(config, "merge_threshold",
                                opts.merge_threshold);

  const DefectSummary defect = classify_expander_type(curve);
  const BlowDownResult result = blow_down_pipeline(curve, scales, opts);

  json out_json = envelope("blow-down", config);
  out_json["result"] = blow_down_to_json(result);
  out_json["result"]["defect_min"] = defect.min_defect;
  out_json["result"]["expander_type"] = defect.expander_type;
  write_json_file(out / "report.json", out_json);
  {
    std::ofstream os(out / "deviation.csv");
    os << "lambda,deviation,slack,is_cone\n";
    char buf[160];
    for (std::size_t j = 0; j < result.reports.size(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%d\n",
                    result.scales[j], result.reports[j].deviation,
                    result.reports[j].slack,
                    result.reports[j].is_cone ? 1 : 0);
      os << buf;
    }
  }
  const ConeReport& final_rep = result.reports.back();
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "blow-down over %zu scales: final deviation %.3e, is_cone %d, "
                "%zu limit rays\n",
                scales.size(), final_rep.deviation, final_rep.is_cone ? 1 : 0,
                result.limit_rays.size());
  write_text(out / "summary.txt", buf);

  if (!defect.expander_type) return kExitHypothesisUnmet;
  // The cone limit is detected through the transverse deviation; the density
  // ratio drift decays only linearly in the scale and is reported, not gated.
  return final_rep.deviation <= opts.tol_cone ? kExitOk : kExitViolation;
}

RectifiableVarifold varifold_from_config(const json& config) {
  if (config.contains("input")) {
    std::ifstream is(config.at("input").get<std::string>());
    if (!is) {
      throw std::runtime_error("cannot read varifold " +
                               config.at("input").get<std::string>());
    }
    return read_varifold_csv(is);
  }
  if (config.contains("fixture")) {
    const PolylineCurve curve = curve_from_config(config);
    return varifold_from_curve(curve, curve.p0);
  }
  const json& syn = config.at("synthetic");
  const std::string kind = syn.at("kind").get<std::string>();
  const double spacing = get_or(syn, "spacing", 0.02);
  const std::uint64_t seed = get_or_size(config, "seed", 0);
  if (kind == "plane") {
    return sample_plane_disc(get_or(syn, "radius", 2.0), spacing, seed);
  }
  if (kind == "cone") {
    return sample_cone(syn.at("half_angle").get<double>(),
                       get_or(syn, "extent", 2.0), spacing, seed);
  }
  if (kind == "sphere") {
    return sample_sphere(spacing, seed);
  }
  throw std::invalid_argument("unknown synthetic varifold kind " + kind);
}

int run_varifold_check(const json& config, const fs::path& out,
                       double tol_scale) {
  const RectifiableVarifold T = varifold_from_config(config);
  validate_varifold(T);
  const double tol = get_or(config, "tol", 1e-6) * tol_scale;

  json out_json = envelope("varifold-check", config);
  json& result = out_json["result"];
  result["dim_n"] = T.dim_n;
  result["ambient"] = T.ambient;
  result["atoms"] = T.atoms.size();
  result["total_mass"] = T.total_mass();
  if (config.contains("radii")) {
    json ratios = json::array();
    for (double r : config.at("radii").get<std::vector<double>>()) {
      ratios.push_back({r, density_ratio(T, r)});
    }
    result["density_ratios"] = ratios;
  }

  bool warning = false;
  if (config.contains("annulus")) {
    const double s = config.at("annulus").at(0).get<double>();
    const double t = config.at("annulus").at(1).get<double>();
    const MonotonicitySlack mono = monotonicity_check(T, s, t);
    warning = mono.slack < -tol;
    result["monotonicity"] = {{"s", s},
                              {"t", t},
                              {"ratio_s", mono.ratio_s},
                              {"ratio_t", mono.ratio_t},
                              {"transverse_term", mono.transverse_term},
                              {"slack", mono.slack},
                              {"hypothesis_warning", warning}};
    if (warning) {
      result["monotonicity"]["warning_text"] =
          "negative slack: the generating surface may violate "
          "H.(x-p0) >= 0 (e.g. compact surfaces)";
    }
    // Deviation is undefined on an empty annulus (all mass inside B_s).
    double annulus_mass = 0.0;
    for (const auto& a : T.atoms) {
      const double r = atom_radius(T, a);
      if (r >= s && r < t) annulus_mass += a.w;
    }
    if (annulus_mass > 0.0) {
      result["cone_deviation"] = cone_deviation(T, s, t);
    } else {
      result["cone_deviation"] = nullptr;
    }
  }
  write_json_file(out / "report.json", out_json);
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "varifold: %zu atoms, mass %.8g%s\n", T.atoms.size(),
                T.total_mass(),
                warning ? "; monotonicity slack negative (hypothesis warning)"
                        : "");
  write_text(out / "summary.txt", buf);
  return warning ? kExitHypothesisUnmet : kExitOk;
}

int severity_rank(int code) {
  switch (code) {
    case kExitConfigError: return 3;
    case kExitViolation: return 2;
    case kExitHypothesisUnmet: return 1;
    default: return 0;
  }
}

}  // namespace

std::string config_hash(const nlohmann::json& config) {
  const std::string dump = config.dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : dump) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

PolylineCurve curve_from_config(const nlohmann::json& config) {
  if (config.contains("input")) {
    return load_curve(config.at("input").get<std::string>());
  }
  const json& fx = config.at("fixture");
  const std::string kind = fx.at("kind").get<std::string>();
  PolylineCurve curve;
  if (kind == "line_through_origin") {
    curve = make_line_through_origin(get_or(fx, "angle", 0.0),
                                     get_or(fx, "extent", 50.0),
                                     get_or_size(fx, "n", 20001));
  } else if (kind == "offset_line") {
    curve = make_offset_line(get_or(fx, "b", 1.0), get_or(fx, "extent", 50.0),
                             get_or_size(fx, "n", 20001));
  } else if (kind == "circle") {
    curve = make_circle(get_or(fx, "r", 1.0),
                        fx.contains("center") ? vec2_from(fx.at("center"))
                                              : Vec2{0.0, 0.0},
                        get_or_size(fx, "n", 3600));
  } else if (kind == "two_ray_cone") {
    curve = make_two_ray_cone(fx.at("angle1").get<double>(),
                              fx.at("angle2").get<double>(),
                              get_or(fx, "extent", 50.0),
                              get_or_size(fx, "n", 20001));
  } else if (kind == "expander") {
    ExpanderShootingProblem p;
    p.mu = get_or(fx, "mu", 1.0);
    p.b = get_or(fx, "b", 1.0);
    p.ds = get_or(fx, "ds", 1e-3);
    p.s_max = get_or(fx, "s_max", 20.0);
    return integrate_expander(p);
  } else {
    throw std::invalid_argument("unknown fixture kind " + kind);
  }
  if (fx.contains("mu")) curve.mu = fx.at("mu").get<double>();
  if (fx.contains("p0")) curve.p0 = vec2_from(fx.at("p0"));
  validate_curve(curve);
  return curve;
}

ScalarField field_from_config(const PolylineCurve& curve,
                              const nlohmann::json& config) {
  if (!config.contains("field")) return make_constant_field(curve, 1.0);
  const json& f = config.at("field");
  const std::string kind = f.at("kind").get<std::string>();
  if (kind == "constant") {
    return make_constant_field(curve, get_or(f, "value", 1.0));
  }
  if (kind == "one_plus_r2") {
    ScalarField field;
    field.values.reserve(curve.vertices.size());
    for (const Vec2& v : curve.vertices) {
      field.values.push_back(1.0 + norm2(v - curve.p0));
    }
    return field;
  }
  throw std::invalid_argument("unknown field kind " + kind);
}

int run_scenario(const nlohmann::json& config,
                 const std::filesystem::path& out_dir, double tol_scale) {
  try {
    fs::create_directories(out_dir);
    const std::string kind = config.at("scenario").get<std::string>();
    if (kind == "gen-expander") return run_gen_expander(config, out_dir);
    if (kind == "verify-thm13") {
      return run_verify("thm13", config, out_dir, tol_scale);
    }
    if (kind == "verify-cor22") {
      return run_verify("cor22", config, out_dir, tol_scale);
    }
    if (kind == "verify-cor23") {
      return run_verify("cor23", config, out_dir, tol_scale);
    }
    if (kind == "flow") return run_flow(config, out_dir);
    if (kind == "blow-down") return run_blow_down(config, out_dir, tol_scale);
    if (kind == "varifold-check") {
      return run_varifold_check(config, out_dir, tol_scale);
    }
    std::cerr << "unknown scenario kind: " << kind << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "scenario error: " << e.what() << "\n";
    return kExitConfigError;
  }
}

int run_config_file(const std::filesystem::path& config_path,
                    const std::filesystem::path& out_dir, int threads,
                    double tol_scale) {
  nlohmann::json config;
  try {
    std::ifstream is(config_path);
    if (!is) {
      throw std::runtime_error("cannot read config " + config_path.string());
    }
    config = nlohmann::json::parse(is);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  }
  return run_config(config, out_dir, threads, tol_scale);
}

int run_config(const nlohmann::json& config,
               const std::filesystem::path& out_dir, int threads,
               double tol_scale) {
  if (!config.is_array()) {
    return run_scenario(config, out_dir, tol_scale);
  }
  const std::size_t count = config.size();
  std::vector<int> codes(count, 0);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
      char name[32];
      std::snprintf(name, sizeof name, "scenario_%03zu", i);
      codes[i] = run_scenario(config.at(i), out_dir / name, tol_scale);
    }
  };
  const int n_threads = std::max(1, std::min<int>(threads, count));
  std::vector<std::thread> pool;
  for (int i = 0; i < n_threads - 1; ++i) pool.emplace_back(worker);
  worker();
  for (std::thread& th : pool) th.join();

  int worst = kExitOk;
  for (int code : codes) {
    if (severity_rank(code) > severity_rank(worst)) worst = code;
  }
  return worst;
}

int emit_plots(const std::filesystem::path& report_json,
               const std::filesystem::path& out_dir) {
  try {
    std::ifstream is(report_json);
    if (!is) throw std::runtime_error("cannot read " + report_json.string());
    const json rep = json::parse(is);
    fs::create_directories(out_dir);
    char buf[160];

    if (rep.contains("report") && rep.at("report").contains("rows")) {
      std::ofstream os(out_dir / "slack_series.csv");
      os << "R,slack\n";
      for (const json& row : rep.at("report").at("rows")) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n",
                      row.at("r2").get<double>(),
                      row.at("slack").get<double>());
        os << buf;
      }
      return kExitOk;
    }
    if (rep.contains("result") && rep.at("result").contains("reports")) {
      std::ofstream os(out_dir / "deviation_series.csv");
      os << "lambda,deviation\n";
      const json& result = rep.at("result");
      for (std::size_t j = 0; j < result.at("reports").size(); ++j) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n",
                      result.at("scales").at(j).get<double>(),
                      result.at("reports").at(j).at("deviation").get<double>());
        os << buf;
      }
      return kExitOk;
    }
    if (rep.contains("result") && rep.at("result").contains("error_series")) {
      std::ofstream os(out_dir / "error_series.csv");
      os << "t,error\n";
      for (const json& e : rep.at("result").at("error_series")) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n",
                      e.at(0).get<double>(), e.at(1).get<double>());
        os << buf;
      }
      return kExitOk;
    }
    // Nothing plottable: emit an empty header-only series.
    std::ofstream os(out_dir / "series.csv");
    os << "x,y\n";
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "report error: " << e.what() << "\n";
    return kExitConfigError;
  }
}

}  // namespace explab
