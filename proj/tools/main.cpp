#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "explab/scenario.hpp"

namespace {

using nlohmann::json;

json load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read config " + path);
  return json::parse(is);
}

// Loads --config when given, otherwise starts from an empty object the
// subcommand fills from its flags.
struct CommonArgs {
  std::string config_path;
  std::string out_dir = "out";
  int threads = 1;
  double tol_scale = 1.0;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "explab: self-expander curves, density-ratio monotonicity checks, mean "
      "curvature flow and varifold blow-down reports"};
  app.require_subcommand(0, 1);

  CommonArgs common;
  app.add_option("--config", common.config_path, "scenario config JSON");
  app.add_option("--out", common.out_dir, "output directory");
  app.add_option("--threads", common.threads, "batch worker threads");
  app.add_option("--tol-scale", common.tol_scale,
                 "multiplies verification tolerances");

  // gen-expander
  auto* gen = app.add_subcommand("gen-expander", "integrate a self-expander");
  gen->fallthrough();
  double gen_mu = 1.0, gen_b = 1.0, gen_ds = 1e-3, gen_smax = 20.0;
  gen->add_option("--mu", gen_mu, "expander constant");
  gen->add_option("--b", gen_b, "initial height");
  gen->add_option("--ds", gen_ds, "arclength step");
  gen->add_option("--s-max", gen_smax, "half arclength");

  // verify
  auto* verify = app.add_subcommand("verify", "run a verification scenario");
  verify->fallthrough();
  std::string claim = "thm13";
  verify->add_option("--claim", claim,
                     "claim id: thm13 | cor22 | cor23");

  // flow
  auto* flow = app.add_subcommand("flow", "evolve a curve by mean curvature");
  flow->fallthrough();
  double flow_t0 = 0.5, flow_t1 = 1.0, flow_dt = 0.0, flow_cfl = 0.2;
  std::string flow_boundary = "pinned_exact";
  std::size_t flow_snap = 0;
  flow->add_option("--t0", flow_t0, "start time");
  flow->add_option("--t1", flow_t1, "end time");
  flow->add_option("--dt", flow_dt, "time step (default cfl*h^2)");
  flow->add_option("--cfl", flow_cfl, "CFL number (<= 0.25)");
  flow->add_option("--boundary", flow_boundary,
                   "pinned_exact | pinned_fixed");
  flow->add_option("--snapshot-every", flow_snap, "steps between snapshots");

  auto* blow = app.add_subcommand("blow-down", "rescale toward the cone at "
                                               "infinity");
  blow->fallthrough();
  auto* vcheck = app.add_subcommand("varifold-check",
                                    "mass, density ratios and monotonicity "
                                    "slack of a varifold");
  vcheck->fallthrough();
  auto* report = app.add_subcommand("report", "emit plot series from a "
                                              "report");
  report->fallthrough();
  std::string report_input;
  report->add_option("input", report_input, "report.json path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (report->parsed()) {
      return explab::emit_plots(report_input, common.out_dir);
    }

    json config;
    if (!common.config_path.empty()) config = load_config(common.config_path);

    if (config.is_array()) {
      return explab::run_config(config, common.out_dir, common.threads,
                                common.tol_scale);
    }

    if (gen->parsed()) {
      config["scenario"] = "gen-expander";
      if (gen->count("--mu")) config["mu"] = gen_mu;
      if (gen->count("--b")) config["b"] = gen_b;
      if (gen->count("--ds")) config["ds"] = gen_ds;
      if (gen->count("--s-max")) config["s_max"] = gen_smax;
    } else if (verify->parsed()) {
      config["scenario"] = "verify-" + claim;
    } else if (flow->parsed()) {
      config["scenario"] = "flow";
      if (flow->count("--t0")) config["t0"] = flow_t0;
      if (flow->count("--t1") || !config.contains("t1")) config["t1"] = flow_t1;
      if (flow->count("--dt")) config["dt"] = flow_dt;
      if (flow->count("--cfl")) config["cfl"] = flow_cfl;
      if (flow->count("--boundary")) config["boundary"] = flow_boundary;
      if (flow->count("--snapshot-every")) {
        config["snapshot_every"] = flow_snap;
      }
    } else if (blow->parsed()) {
      config["scenario"] = "blow-down";
    } else if (vcheck->parsed()) {
      config["scenario"] = "varifold-check";
    } else if (!config.contains("scenario")) {
      std::cerr << "nothing to do: pass a subcommand or --config\n";
      return explab::kExitConfigError;
    }

    return explab::run_config(config, common.out_dir, common.threads,
                              common.tol_scale);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return explab::kExitConfigError;
  }
}
