#include <doctest.h>

#include <cmath>
#include <string>

#include "amoeba/report.hpp"
#include "amoeba/svg.hpp"
#include "amoeba/util.hpp"

using namespace amoeba;

namespace {

std::string scenario_path(const std::string& name) { return std::string(AMOEBA_SCENARIO_DIR) + "/" + name + ".json"; }

const char* kLinePair = R"({
  "mode": "verify",
  "polynomials": [
    {"terms": [{"exp": [1, 0], "coef": 1}, {"exp": [0, 1], "coef": 1}, {"exp": [0, 0], "coef": 1}]},
    {"terms": [{"exp": [1, 0], "coef": 1}, {"exp": [0, 1], "coef": 1}, {"exp": [0, 0], "coef": 4}]}
  ],
  "window": {"x_min": -2, "x_max": 3, "y_min": -2, "y_max": 3},
  "resolution": 200
})";

std::string error_of(const std::string& text) {
  try {
    check_scenario(parse_scenario(text));
  } catch (const InputError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("malformed JSON reports line and column") {
  const std::string text = "{\n  \"mode\": \"verify\",\n  \"polynomials\": [,]\n}\n";
  const std::string msg = error_of(text);
  CHECK(msg.find("line 3") != std::string::npos);
  CHECK(msg.find("column 19") != std::string::npos);
  CHECK(error_of("").find("line 1") != std::string::npos);
}

TEST_CASE("scenario validation") {
  CHECK(error_of(R"({"mode": "verify", "polynomials": [{"terms": [{"exp": [1, 0], "coef": 1}, {"exp": [0, 0], "coef": 1}]}]})")
            .find("exactly 2") != std::string::npos);
  CHECK(error_of(R"({"mode": "amoeba", "polynomials": []})").find("exactly 1") != std::string::npos);
  CHECK(error_of(R"({"mode": "sideways", "polynomials": []})").find("unknown mode") != std::string::npos);
  CHECK(error_of(R"({"polynomials": [], "colour": 3})").find("unknown scenario field") != std::string::npos);
  CHECK(error_of(R"({"mode": "amoeba", "polynomials": [{"terms": [{"exp": [1, 1], "coef": 1}]}]})")
            .find("monomial") != std::string::npos);
  CHECK(error_of(kLinePair).empty());
}

TEST_CASE("scenario defaults and fields") {
  const auto s = parse_scenario(kLinePair);
  CHECK(s.mode == Mode::verify);
  CHECK(s.polynomials.size() == 2);
  CHECK(s.resolution == 200);
  CHECK(s.angle_samples == 256);
  CHECK(s.quad_n == 256);
  CHECK(s.seed == 0);
  REQUIRE(s.window.has_value());
  CHECK(s.window->x_min == -2);
  const auto w = scenario_window(s);
  CHECK(w.nx == 200);
  CHECK(w.ny == 200);
}

TEST_CASE("mode names") {
  for (auto m : {Mode::newton, Mode::amoeba, Mode::spine, Mode::tropical, Mode::intersect, Mode::verify})
    CHECK(mode_from_string(to_string(m)) == m);
  CHECK_FALSE(mode_from_string("Verify").has_value());
}

TEST_CASE("exit codes follow the verdicts") {
  using nlohmann::json;
  CHECK(exit_code_for(json::array()) == 0);
  CHECK(exit_code_for(json::parse(R"([{"status":"pass"},{"status":"flagged"},{"status":"not checked"}])")) == 0);
  CHECK(exit_code_for(json::parse(R"([{"status":"pass"},{"status":"fail"}])")) == 2);
}

TEST_CASE("automatic window covers the tropical vertices") {
  const LaurentPolynomial f{{{1, 0}, 1.0}, {{0, 1}, 1.0}, {{0, 0}, 4.0}};
  const auto w = auto_window({f}, 100);
  const double c = std::log(4.0);
  CHECK(w.x_min <= c - 2.0 + 1e-9);
  CHECK(w.x_max >= c + 2.0 - 1e-9);
  CHECK(w.x_max - w.x_min == doctest::Approx(w.y_max - w.y_min));
  CHECK(w.nx == 100);
}

TEST_CASE("newton mode") {
  const auto out = run_scenario(load_scenario(scenario_path("newton_fig1")));
  CHECK(out.exit_code == 0);
  CHECK(out.report["mixed_volume"] == 3);
  CHECK(out.report["bezout_product"] == 3);
  CHECK(out.report["mixed_cones"] == 2);
  CHECK(out.svg.find("<svg") != std::string::npos);
}

TEST_CASE("tropical mode") {
  const auto out = run_scenario(load_scenario(scenario_path("tropical_fig3")));
  CHECK(out.exit_code == 0);
  CHECK(out.report["mixed_volume"] == 12);
}

TEST_CASE("amoeba mode draws the three tentacles of the line") {
  auto s = load_scenario(scenario_path("line"));
  s.resolution = 200;
  const auto out = run_scenario(s);
  CHECK(out.exit_code == 0);
  CHECK(out.report["complement_components"].size() == 3);
  CHECK(out.report["limit_directions"].size() == 3);
  CHECK(out.svg.find("</svg>") != std::string::npos);
}

TEST_CASE("spine mode") {
  auto s = load_scenario(scenario_path("line"));
  s.mode = Mode::spine;
  s.resolution = 200;
  const auto out = run_scenario(s);
  CHECK(out.exit_code == 0);
  for (const auto& v : out.report["verdicts"]) CHECK(v["theorem"].get<std::string>().size() > 0);
}

TEST_CASE("verify mode on the line pair") {
  const auto out = run_scenario(parse_scenario(kLinePair));
  CHECK(out.exit_code == 0);
  CHECK(out.report["components"] == 1);
  CHECK(out.report["vertices"].size() == 2);
  CHECK(out.report["mixed_volume"] == 1);
  for (const auto& v : out.report["verdicts"]) {
    CHECK(v.contains("theorem"));
    CHECK(v["status"] != "fail");
  }
}

TEST_CASE("intersect mode keeps only the screens") {
  auto s = parse_scenario(kLinePair);
  s.mode = Mode::intersect;
  const auto out = run_scenario(s);
  for (const auto& v : out.report["verdicts"]) {
    const auto key = v["key"].get<std::string>();
    CHECK((key.rfind("genericity", 0) == 0 || key == "degeneracy"));
  }
}

TEST_CASE("identical polynomials exit 2") {
  auto s = load_scenario(scenario_path("identical"));
  s.resolution = 200;
  const auto out = run_scenario(s);
  CHECK(out.exit_code == 2);
}

TEST_CASE("reports are deterministic across runs and worker counts") {
  const auto s = parse_scenario(kLinePair);
  set_worker_count(1);
  const auto a = run_scenario(s);
  set_worker_count(8);
  const auto b = run_scenario(s);
  const auto c = run_scenario(s);
  set_worker_count(0);
  CHECK(a.report.dump() == b.report.dump());
  CHECK(b.report.dump() == c.report.dump());
  CHECK(a.svg == b.svg);
}

TEST_CASE("svg canvas") {
  SvgCanvas canvas(-1, 1, -1, 1, 100);
  canvas.dot({0, 0}, 2, "red");
  canvas.text({0.5, 0.5}, "a<b");
  const auto s = canvas.str();
  CHECK(s.find("cx=\"50.00\" cy=\"50.00\"") != std::string::npos);
  CHECK(s.find("a&lt;b") != std::string::npos);
  CHECK_THROWS(SvgCanvas(1, 1, 0, 1));
}
