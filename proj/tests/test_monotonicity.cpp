#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <sstream>

#include "explab/expander.hpp"
#include "explab/monotonicity.hpp"
#include "explab/report_io.hpp"

using namespace explab;

namespace {

// Arc of the unit circle centered at (2,0) inside B_R(0), for R in [1,3].
double off_center_circle_arc(double R) {
  if (R <= 1.0) return 0.0;
  if (R >= 3.0) return 2.0 * M_PI;
  return 2.0 * (M_PI - std::acos((R * R - 5.0) / 4.0));
}

double max_abs_slack(const VerificationReport& rep) {
  double worst = 0.0;
  for (const AnnulusRow& r : rep.rows) {
    worst = std::max(worst, std::abs(r.slack));
  }
  return worst;
}

}  // namespace

TEST_CASE("offset line with unit field is the equality case") {
  const PolylineCurve c = make_offset_line(1.0, 50.0, 20001);
  VerifyOptions opts;
  opts.tol_eq = 1e-4;
  const VerificationReport rep = verify_theorem13(
      c, make_constant_field(c, 1.0), {1.0, 1.5, 2.0}, opts);
  CHECK(rep.verdict == Verdict::equality);
  CHECK(max_abs_slack(rep) <= 1e-4);
  CHECK(rep.hypothesis.defect_ok);
}

TEST_CASE("equality survives a non-constant field on the offset line") {
  // Exercises the Laplace term: f = 1 + |x|^2 has laplacian 2.
  const PolylineCurve c = make_offset_line(1.0, 50.0, 20001);
  ScalarField f;
  for (const Vec2& v : c.vertices) f.values.push_back(1.0 + norm2(v));
  VerifyOptions opts;
  opts.tol_eq = 1e-4;
  const VerificationReport rep =
      verify_theorem13(c, f, {1.0, 1.5, 2.0}, opts);
  CHECK(rep.verdict == Verdict::equality);
  for (const AnnulusRow& row : rep.rows) CHECK(row.term2 != 0.0);
}

TEST_CASE("line through the base point zeroes every term") {
  PolylineCurve c = make_line_through_origin(0.4, 30.0, 12001);
  c.mu = 0.9;
  const VerificationReport rep = verify_theorem13(
      c, make_constant_field(c, 1.0), {1.0, 2.0, 4.0}, VerifyOptions{});
  CHECK(rep.verdict == Verdict::equality);
  for (const AnnulusRow& r : rep.rows) {
    CHECK(std::abs(r.lhs) <= 1e-12);
    CHECK(std::abs(r.term1) <= 1e-12);
    CHECK(std::abs(r.term3) <= 1e-12);
    CHECK(std::abs(r.slack) <= 1e-12);
  }
}

TEST_CASE("shooting expander is the equality case") {
  const PolylineCurve c = integrate_expander({1.0, 1.0, 2e-3, 10.0});
  VerifyOptions opts;
  opts.tol_eq = 5e-3;
  const VerificationReport rep = verify_theorem13(
      c, make_constant_field(c, 1.0), {0.5, 1.0, 2.0, 4.0}, opts);
  CHECK(rep.verdict == Verdict::equality);
  CHECK(max_abs_slack(rep) <= 5e-3);
}

TEST_CASE("grids with fewer than two radii are rejected") {
  const PolylineCurve c = make_offset_line(1.0, 10.0, 101);
  CHECK_THROWS_AS(verify_theorem13(c, make_constant_field(c, 1.0), {2.0},
                                   VerifyOptions{}),
                  std::invalid_argument);
}

TEST_CASE("worst slack obeys the resolution-scaled tolerance") {
  // C = 0.01 calibrated on the offset-line oracle (measured slack is about
  // 40x smaller); violations here fail the build.
  struct Item {
    PolylineCurve curve;
    std::vector<double> grid;
  };
  std::vector<Item> items;
  items.push_back({make_offset_line(1.0, 50.0, 20001), {1.0, 1.5, 2.0}});
  items.push_back({make_offset_line(1.0, 50.0, 5001), {1.0, 1.5, 2.0}});
  items.push_back(
      {make_two_ray_cone(0.5, 2.2, 30.0, 10001), {1.0, 2.0, 4.0}});
  items.push_back(
      {integrate_expander({1.0, 1.0, 2e-3, 10.0}), {0.5, 1.0, 2.0, 4.0}});
  for (const Item& item : items) {
    double h = 0.0, step = 0.0;
    for (double l : edge_lengths(item.curve)) h = std::max(h, l);
    for (std::size_t k = 0; k + 1 < item.grid.size(); ++k) {
      step = std::max(step, item.grid[k + 1] - item.grid[k]);
    }
    const VerificationReport rep = verify_theorem13(
        item.curve, make_constant_field(item.curve, 1.0), item.grid,
        VerifyOptions{});
    REQUIRE(rep.hypothesis.defect_ok);
    CHECK(rep.worst_slack >= -0.01 * (h + step * h));
  }
}

TEST_CASE("off-center circle: hypothesis failure is reported, not violation") {
  const PolylineCurve c = make_circle(1.0, {2.0, 0.0}, 3600);
  VerifyOptions opts;
  const std::vector<double> grid{1.5, 2.5, 3.5, 4.5};
  const VerificationReport rep = verify_corollary23(c, grid, opts);
  CHECK(rep.verdict == Verdict::hypothesis_unmet);
  CHECK(rep.hypothesis.defect_min < -1e-3);
  CHECK(rep.worst_slack < -1e-3);

  // Slack converges to a strictly negative limit under refinement.
  const VerificationReport fine =
      verify_corollary23(make_circle(1.0, {2.0, 0.0}, 7200), grid, opts);
  CHECK(fine.verdict == Verdict::hypothesis_unmet);
  CHECK(std::abs(fine.worst_slack - rep.worst_slack) <= 1e-4);

  // Density ratio against the closed-form arc length.
  const RadialProfile p = build_radial_profile(
      c, make_constant_field(c, 1.0), {0, 0}, grid);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    CHECK(std::abs(p.f_integral[k] - off_center_circle_arc(grid[k])) <= 1e-5);
  }
}

TEST_CASE("cor22 g-function behaviour") {
  SUBCASE("line through the base point: g is constant") {
    const PolylineCurve c = make_line_through_origin(0.0, 30.0, 12001);
    const VerificationReport rep = verify_corollary22(
        c, make_constant_field(c, 1.0), 0.0, 4.0, {1.0, 2.0, 3.0, 4.0},
        VerifyOptions{});
    CHECK((rep.verdict == Verdict::holds || rep.verdict == Verdict::equality));
    for (double g : rep.g) CHECK(g == doctest::Approx(2.0).epsilon(1e-12));
  }
  SUBCASE("offset line: g = 2 sqrt(R^2-1)/R strictly increases") {
    const PolylineCurve c = make_offset_line(1.0, 50.0, 20001);
    const std::vector<double> grid{1.0, 1.2, 1.4, 1.6, 1.8, 2.0};
    const VerificationReport rep = verify_corollary22(
        c, make_constant_field(c, 1.0), 0.0, 2.0, grid, VerifyOptions{});
    CHECK(rep.verdict == Verdict::holds);
    CHECK(rep.worst_slack >= -1e-10);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const double R = grid[k];
      const double expected = 2.0 * std::sqrt(R * R - 1.0) / R;
      CHECK(std::abs(rep.g[k] - expected) <= 1e-9);
    }
  }
  SUBCASE("off-center circle raises the hypothesis flag but reports g") {
    const PolylineCurve c = make_circle(1.0, {2.0, 0.0}, 1800);
    const VerificationReport rep = verify_corollary22(
        c, make_constant_field(c, 1.0), 0.3, 5.0, {1.5, 3.0, 4.5},
        VerifyOptions{});
    CHECK(rep.verdict == Verdict::hypothesis_unmet);
    CHECK(rep.g.size() == 3);
    for (double g : rep.g) CHECK(std::isfinite(g));
  }
  SUBCASE("grid beyond R0 is rejected") {
    const PolylineCurve c = make_offset_line(1.0, 10.0, 101);
    CHECK_THROWS_AS(
        verify_corollary22(c, make_constant_field(c, 1.0), 0.0, 2.0,
                           {1.0, 2.5}, VerifyOptions{}),
        std::invalid_argument);
  }
}

TEST_CASE("mean value bound") {
  SUBCASE("unit field on a centered line saturates the bound") {
    const PolylineCurve c = make_line_through_origin(0.3, 50.0, 20001);
    const MeanValueBound b =
        mean_value_bound(c, make_constant_field(c, 1.0), 0.0, 5.0);
    CHECK(b.bound == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(b.f_at_p0 == 1.0);
    CHECK(b.satisfied);
  }
  SUBCASE("quadratic field: bound = 1 + R0^2/3") {
    const PolylineCurve c = make_line_through_origin(0.0, 50.0, 20001);
    ScalarField f;
    for (const Vec2& v : c.vertices) f.values.push_back(1.0 + norm2(v));
    const MeanValueBound b = mean_value_bound(c, f, 0.0, 3.0);
    CHECK(b.bound == doctest::Approx(1.0 + 3.0).epsilon(1e-6));
    CHECK(b.satisfied);
  }
  SUBCASE("base point off the curve is rejected") {
    const PolylineCurve c = make_offset_line(1.0, 10.0, 1001);
    CHECK_THROWS_WITH_AS(
        mean_value_bound(c, make_constant_field(c, 1.0), 0.0, 5.0),
        doctest::Contains("does not lie on the curve"), std::runtime_error);
  }
}

TEST_CASE("cor23 delegates with a unit field") {
  SUBCASE("two-ray cone is the minimal equality case") {
    const PolylineCurve c = make_two_ray_cone(0.7, 2.3, 30.0, 12001);
    const VerificationReport rep =
        verify_corollary23(c, {1.0, 2.0, 4.0}, VerifyOptions{});
    CHECK(rep.claim == "cor23");
    CHECK(rep.verdict == Verdict::equality);
    CHECK(max_abs_slack(rep) <= 1e-12);
  }
  SUBCASE("shooting expander is the equality case") {
    const PolylineCurve c = integrate_expander({1.0, 1.0, 2e-3, 10.0});
    VerifyOptions opts;
    opts.tol_eq = 5e-3;
    const VerificationReport rep =
        verify_corollary23(c, {0.5, 1.0, 2.0, 4.0}, opts);
    CHECK(rep.verdict == Verdict::equality);
  }
}

TEST_CASE("report serialization") {
  const PolylineCurve c = make_offset_line(1.0, 50.0, 5001);
  const VerificationReport rep = verify_theorem13(
      c, make_constant_field(c, 1.0), {1.0, 1.5, 2.0}, VerifyOptions{});
  const nlohmann::json j = report_to_json(rep);
  CHECK(j.at("claim") == "thm13");
  CHECK(j.at("rows").size() == 2);
  CHECK(j.contains("weighting_note"));
  CHECK(j.at("hypothesis").at("met").get<bool>());

  std::ostringstream os;
  write_report_csv(rep, os);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "R1,R2,lhs,term1,term2,term3,slack");
  std::size_t rows = 0;
  while (std::getline(is, line)) ++rows;
  CHECK(rows == 2);
}
