#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "explab/curve_io.hpp"
#include "explab/expander.hpp"
#include "explab/scenario.hpp"

using namespace explab;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& tag) {
  const fs::path p = fs::temp_directory_path() / ("explab_test_" + tag);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p);
  REQUIRE(is);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("curve exchange format round trip") {
  const fs::path dir = fresh_dir("curveio");
  PolylineCurve c = make_circle(1.5, {0.5, -0.25}, 64);
  c.mu = 0.75;
  c.p0 = {0.5, -0.25};
  save_curve(c, dir / "c.csv");
  const PolylineCurve back = load_curve(dir / "c.csv");
  CHECK(back.closed == c.closed);
  CHECK(back.mu == c.mu);
  CHECK(back.p0.x == c.p0.x);
  REQUIRE(back.vertices.size() == c.vertices.size());
  for (std::size_t i = 0; i < c.vertices.size(); ++i) {
    CHECK(back.vertices[i].x == c.vertices[i].x);
    CHECK(back.vertices[i].y == c.vertices[i].y);
  }
  CHECK_THROWS_AS(load_curve(dir / "missing.csv"), std::runtime_error);
}

TEST_CASE("verify scenarios map verdicts to exit codes") {
  SUBCASE("cone fixture verifies with equality (exit 0)") {
    const json config = {
        {"scenario", "verify-cor23"},
        {"fixture", {{"kind", "line_through_origin"}, {"angle", 0.3},
                     {"extent", 30.0}, {"n", 4001}}},
        {"grid", {1.0, 2.0, 4.0}},
    };
    const fs::path dir = fresh_dir("cor23_line");
    CHECK(run_scenario(config, dir) == kExitOk);
    const json rep = json::parse(slurp(dir / "report.json"));
    CHECK(rep.at("report").at("verdict") == "equality");
    CHECK(rep.contains("config_hash"));
    CHECK(rep.contains("weighting_note"));
    CHECK(fs::exists(dir / "report.csv"));
    CHECK(fs::exists(dir / "profile.csv"));
    CHECK(fs::exists(dir / "summary.txt"));
  }
  SUBCASE("off-center circle reports hypothesis_unmet (exit 3, never 1)") {
    const json config = {
        {"scenario", "verify-thm13"},
        {"fixture", {{"kind", "circle"}, {"r", 1.0}, {"center", {2.0, 0.0}},
                     {"n", 1800}, {"p0", {0.0, 0.0}}}},
        {"grid", {1.5, 2.5, 3.5, 4.5}},
    };
    const fs::path dir = fresh_dir("thm13_circle");
    CHECK(run_scenario(config, dir) == kExitHypothesisUnmet);
    const json rep = json::parse(slurp(dir / "report.json"));
    CHECK(rep.at("report").at("verdict") == "hypothesis_unmet");
    CHECK(rep.at("report").at("worst_slack").get<double>() < -1e-3);
  }
  SUBCASE("unknown scenario kind is a config error") {
    const json config = {{"scenario", "verify-everything"}};
    CHECK(run_scenario(config, fresh_dir("unknown")) == kExitConfigError);
  }
  SUBCASE("nonpositive tolerances are a config error") {
    const json config = {
        {"scenario", "verify-cor23"},
        {"fixture", {{"kind", "line_through_origin"}, {"angle", 0.0},
                     {"extent", 10.0}, {"n", 101}}},
        {"grid", {1.0, 2.0}},
        {"tolerances", {{"tol_eq", -1e-4}}},
    };
    CHECK(run_scenario(config, fresh_dir("badtol")) == kExitConfigError);
  }
  SUBCASE("unreadable input is a config error") {
    const json config = {{"scenario", "verify-cor23"},
                         {"input", "/nonexistent/curve.csv"},
                         {"grid", {1.0, 2.0}}};
    CHECK(run_scenario(config, fresh_dir("missing_input")) ==
          kExitConfigError);
  }
}

TEST_CASE("malformed config files exit with the config error code") {
  const fs::path dir = fresh_dir("badcfg");
  {
    std::ofstream os(dir / "bad.json");
    os << "{ not json";
  }
  CHECK(run_config_file(dir / "bad.json", dir / "out") == kExitConfigError);
  CHECK(run_config_file(dir / "absent.json", dir / "out") ==
        kExitConfigError);
}

TEST_CASE("reports are byte-identical across runs") {
  const json config = {
      {"scenario", "verify-cor23"},
      {"fixture", {{"kind", "offset_line"}, {"b", 1.0}, {"extent", 50.0},
                   {"n", 5001}}},
      {"grid", {1.0, 1.5, 2.0}},
  };
  const fs::path a = fresh_dir("det_a");
  const fs::path b = fresh_dir("det_b");
  CHECK(run_scenario(config, a) == kExitOk);
  CHECK(run_scenario(config, b) == kExitOk);
  CHECK(slurp(a / "report.json") == slurp(b / "report.json"));
  CHECK(slurp(a / "report.csv") == slurp(b / "report.csv"));
}

TEST_CASE("config hash distinguishes configs") {
  const json a = {{"scenario", "flow"}, {"t1", 1.0}};
  json b = a;
  b["t1"] = 2.0;
  CHECK(config_hash(a) == config_hash(a));
  CHECK(config_hash(a) != config_hash(b));
}

TEST_CASE("gen-expander writes a loadable curve") {
  const json config = {{"scenario", "gen-expander"}, {"mu", 1.0}, {"b", 1.0},
                       {"ds", 4e-3}, {"s_max", 10.0}};
  const fs::path dir = fresh_dir("gen");
  CHECK(run_scenario(config, dir) == kExitOk);
  const PolylineCurve c = load_curve(dir / "curve.csv");
  CHECK(c.mu == 1.0);
  CHECK_FALSE(c.closed);
  const json rep = json::parse(slurp(dir / "report.json"));
  CHECK(rep.at("result").at("expander_type").get<bool>());
  CHECK(rep.at("result").at("theta_inf").get<double>() ==
        doctest::Approx(0.96041).epsilon(1e-4));
}

TEST_CASE("flow scenario writes snapshots and an error series") {
  const json config = {
      {"scenario", "flow"},
      {"fixture", {{"kind", "expander"}, {"mu", 1.0}, {"b", 1.0},
                   {"ds", 0.04}, {"s_max", 10.0}}},
      {"t1", 0.6},
      {"dt", 0.12 * 0.04 * 0.04},
      {"snapshot_every", 500},
  };
  const fs::path dir = fresh_dir("flow");
  CHECK(run_scenario(config, dir) == kExitOk);
  CHECK(fs::exists(dir / "curve_000000.csv"));
  const json rep = json::parse(slurp(dir / "report.json"));
  CHECK(rep.at("result").at("final_error").get<double>() <= 1e-2);

  const fs::path plots = fresh_dir("flow_plots");
  CHECK(emit_plots(dir / "report.json", plots) == kExitOk);
  CHECK(fs::exists(plots / "error_series.csv"));
}

TEST_CASE("blow-down scenario on a cone fixture") {
  const json config = {
      {"scenario", "blow-down"},
      {"fixture", {{"kind", "two_ray_cone"}, {"angle1", 0.4}, {"angle2", 2.0},
                   {"extent", 32.0}, {"n", 131073}}},
      {"scales", {1.0, 0.5, 0.25, 0.125}},
  };
  const fs::path dir = fresh_dir("blowdown");
  CHECK(run_scenario(config, dir) == kExitOk);
  const json rep = json::parse(slurp(dir / "report.json"));
  CHECK(rep.at("result").at("reports").size() == 4);
  CHECK(rep.at("result").at("limit_rays").size() == 2);
  CHECK(fs::exists(dir / "deviation.csv"));

  const fs::path plots = fresh_dir("blowdown_plots");
  CHECK(emit_plots(dir / "report.json", plots) == kExitOk);
  const std::string series = slurp(plots / "deviation_series.csv");
  CHECK(series.rfind("lambda,deviation", 0) == 0);
  CHECK(std::count(series.begin(), series.end(), '\n') == 5);
}

TEST_CASE("varifold-check flags the sphere and accepts the plane") {
  SUBCASE("sphere: hypothesis warning, exit 3") {
    const json config = {
        {"scenario", "varifold-check"},
        {"synthetic", {{"kind", "sphere"}, {"spacing", 0.05}}},
        {"radii", {1.5, 2.0}},
        {"annulus", {1.5, 2.0}},
    };
    const fs::path dir = fresh_dir("vsphere");
    CHECK(run_scenario(config, dir) == kExitHypothesisUnmet);
    const json rep = json::parse(slurp(dir / "report.json"));
    CHECK(rep.at("result").at("monotonicity").at("hypothesis_warning")
              .get<bool>());
    CHECK(rep.at("result").at("monotonicity").at("slack").get<double>() <
          -1e-3);
  }
  SUBCASE("plane disc: slack stays nonnegative, exit 0") {
    const json config = {
        {"scenario", "varifold-check"},
        {"synthetic",
         {{"kind", "plane"}, {"radius", 2.0}, {"spacing", 0.02}}},
        {"annulus", {1.0, 1.6}},
    };
    CHECK(run_scenario(config, fresh_dir("vplane")) == kExitOk);
  }
}

TEST_CASE("snapshot sidecars carry the flow time and still load") {
  const json config = {
      {"scenario", "flow"},
      {"fixture", {{"kind", "circle"}, {"r", 1.0}, {"n", 180}}},
      {"t0", 0.0},
      {"t1", 0.01},
      {"boundary", "pinned_fixed"},
      {"snapshot_every", 100},
  };
  const fs::path dir = fresh_dir("flow_closed");
  CHECK(run_scenario(config, dir) == kExitOk);
  const json sidecar = json::parse(slurp(dir / "curve_000001.json"));
  CHECK(sidecar.contains("time"));
  CHECK(sidecar.at("time").get<double>() > 0.0);
  const PolylineCurve snap = load_curve(dir / "curve_000001.csv");
  CHECK(snap.closed);
  CHECK(snap.vertices.size() == 180);
}

TEST_CASE("tol-scale loosens verification tolerances") {
  // The expander at this resolution misses equality at tol_eq = 1e-6 but
  // meets it once the factor widens the band.
  const json config = {
      {"scenario", "verify-cor23"},
      {"fixture", {{"kind", "expander"}, {"mu", 1.0}, {"b", 1.0},
                   {"ds", 4e-3}, {"s_max", 10.0}}},
      {"grid", {0.5, 1.0, 2.0, 4.0}},
      {"tolerances", {{"tol_eq", 1e-6}, {"tol_slack", 1e-5}}},
  };
  const fs::path strict = fresh_dir("tolscale_strict");
  REQUIRE(run_scenario(config, strict, 1.0) == kExitOk);
  CHECK(json::parse(slurp(strict / "report.json")).at("report").at("verdict") ==
        "holds");
  const fs::path loose = fresh_dir("tolscale_loose");
  REQUIRE(run_scenario(config, loose, 1e4) == kExitOk);
  CHECK(json::parse(slurp(loose / "report.json")).at("report").at("verdict") ==
        "equality");
}

TEST_CASE("mean value block is embedded on request") {
  const json config = {
      {"scenario", "verify-cor22"},
      {"fixture", {{"kind", "line_through_origin"}, {"angle", 0.0},
                   {"extent", 50.0}, {"n", 20001}}},
      {"lambda", 0.0},
      {"R0", 5.0},
      {"grid", {1.0, 2.5, 5.0}},
      {"mean_value", {{"lambda", 0.0}, {"R0", 5.0}}},
  };
  const fs::path dir = fresh_dir("meanvalue");
  CHECK(run_scenario(config, dir) == kExitOk);
  const json rep = json::parse(slurp(dir / "report.json"));
  CHECK(rep.at("mean_value").at("satisfied").get<bool>());
  CHECK(rep.at("mean_value").at("bound").get<double>() ==
        doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("varifold-check accepts a curve fixture") {
  const json config = {
      {"scenario", "varifold-check"},
      {"fixture", {{"kind", "two_ray_cone"}, {"angle1", 0.4}, {"angle2", 2.0},
                   {"extent", 32.0}, {"n", 131073}}},
      {"radii", {1.0, 2.0}},
      {"annulus", {1.0, 2.0}},
  };
  const fs::path dir = fresh_dir("vcurve");
  CHECK(run_scenario(config, dir) == kExitOk);
  const json rep = json::parse(slurp(dir / "report.json"));
  CHECK(rep.at("result").at("dim_n") == 1);
  CHECK(rep.at("result").at("monotonicity").at("slack").get<double>() ==
        doctest::Approx(0.0).epsilon(1e-10));
  CHECK(rep.at("result").at("cone_deviation").get<double>() <= 1e-20);
}

TEST_CASE("batch configs aggregate the most severe exit code") {
  const json batch = json::array({
      json{{"scenario", "verify-cor23"},
           {"fixture", {{"kind", "line_through_origin"}, {"angle", 0.0},
                        {"extent", 20.0}, {"n", 2001}}},
           {"grid", {1.0, 2.0}}},
      json{{"scenario", "verify-cor23"},
           {"fixture", {{"kind", "circle"}, {"r", 1.0},
                        {"center", {2.0, 0.0}}, {"n", 720}}},
           {"grid", {3.5, 4.5}}},
  });
  const fs::path dir = fresh_dir("batch");
  CHECK(run_config(batch, dir, 2) == kExitHypothesisUnmet);
  CHECK(fs::exists(dir / "scenario_000" / "report.json"));
  CHECK(fs::exists(dir / "scenario_001" / "report.json"));
}

TEST_CASE("emit_plots writes slack series and a header-only fallback") {
  const json config = {
      {"scenario", "verify-cor23"},
      {"fixture", {{"kind", "offset_line"}, {"b", 1.0}, {"extent", 50.0},
                   {"n", 2001}}},
      {"grid", {1.0, 1.5, 2.0}},
  };
  const fs::path dir = fresh_dir("plots_src");
  REQUIRE(run_scenario(config, dir) == kExitOk);
  const fs::path plots = fresh_dir("plots_out");
  CHECK(emit_plots(dir / "report.json", plots) == kExitOk);
  const std::string series = slurp(plots / "slack_series.csv");
  CHECK(series.rfind("R,slack", 0) == 0);
  CHECK(std::count(series.begin(), series.end(), '\n') == 3);

  // a report with nothing plottable yields a header-only series
  const fs::path empty_dir = fresh_dir("plots_empty");
  {
    std::ofstream os(empty_dir / "empty.json");
    os << "{}";
  }
  CHECK(emit_plots(empty_dir / "empty.json", empty_dir / "out") == kExitOk);
  CHECK(slurp(empty_dir / "out" / "series.csv") == "x,y\n");
}
