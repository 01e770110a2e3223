#include <cmath>
#include <numbers>

#include "doctest.h"
#include "gibc/errors.hpp"
#include "gibc/io.hpp"

using namespace gibc;
using nlohmann::json;

namespace
{

constexpr double pi = std::numbers::pi;

FarField sample_farfield()
{
  FarField f;
  f.k = 6.0;
  f.radius = 1.0;
  for (int j = 0; j < 3; ++j)
  {
    Eigen::VectorXcd s(32);
    for (int m = 0; m < 32; ++m)
    {
      s[m] = std::polar(1.0 + 0.1 * j, 0.2 * m) + cplx(0.3 * std::cos(m), 0.0);
    }
    f.incident_angles.push_back(j);
    f.samples.push_back(s);
  }
  return f;
}

}  // namespace

TEST_CASE("noise calibration")
{
  const FarField clean = sample_farfield();
  SUBCASE("zero noise is the identity")
  {
    const FarField out = add_noise(clean, 0.0, 5);
    for (std::size_t j = 0; j < clean.num_incident(); ++j)
    {
      CHECK((out.samples[j].array() == clean.samples[j].array()).all());
    }
  }
  SUBCASE("relative deviation equals the noise level")
  {
    const FarField a = add_noise(clean, 0.05, 5);
    const FarField b = add_noise(clean, 0.05, 6);
    const FarField a2 = add_noise(clean, 0.05, 5);
    for (std::size_t j = 0; j < clean.num_incident(); ++j)
    {
      CHECK(std::abs(relative_l2_error(a.samples[j], clean.samples[j]) - 0.05) < 1e-12);
      CHECK(std::abs(relative_l2_error(b.samples[j], clean.samples[j]) - 0.05) < 1e-12);
      CHECK((a.samples[j] - b.samples[j]).norm() > 1e-3);
      CHECK((a.samples[j].array() == a2.samples[j].array()).all());
    }
  }
}

TEST_CASE("run configuration")
{
  SUBCASE("defaults and round trip")
  {
    const RunConfig c = run_config_from_json(json::object());
    CHECK(c.scatter.k == 6.0);
    CHECK(c.incident_count == 8);
    const json j = to_json(c);
    CHECK(to_json(run_config_from_json(j)) == j);
  }
  SUBCASE("values are read")
  {
    const json j = json::parse(R"({
      "scatter": {"k": 4, "h": 0.05},
      "incident_count": 2, "incident_offset": 0.5, "noise": 0.01,
      "truth": {"geometry": {"kind": "polar", "radius": 0.3, "cos": [0, 0, 0.08]},
                "impedance": {"lambda": {"c0": [0, 0.75], "cos": [0, [0, -0.25]], "phase": 0.1},
                              "mu": 2, "active": ["im_lambda", "re_mu"]}},
      "inversion": {"schedule": "shape", "max_iterations": 12}
    })");
    const RunConfig c = run_config_from_json(j);
    CHECK(c.scatter.k == 4.0);
    CHECK(c.incident_angles() == std::vector<double>{0.5, 0.5 + pi});
    CHECK(c.inversion.schedule == Schedule::ShapeOnly);
    CHECK(c.inversion.max_iterations == 12);
    CHECK(c.truth.impedance.active.im_lambda);
    CHECK(!c.truth.impedance.active.re_lambda);
    const FourierProfile &l = c.truth.impedance.lambda;
    const double t = 0.4;
    const cplx ref = cplx(0.0, 0.75) + cplx(0.0, -0.25) * std::cos(2.0 * (t + 0.1));
    CHECK(std::abs(l(t) - ref) < 1e-15);
    CHECK(to_json(run_config_from_json(to_json(c))) == to_json(c));
  }
  SUBCASE("errors")
  {
    CHECK_THROWS_AS(run_config_from_json(json::parse(R"({"bogus": 1})")), ConfigError);
    CHECK_THROWS_AS(run_config_from_json(json::parse(R"({"scatter": {"k": -1}})")), ConfigError);
    CHECK_THROWS_AS(run_config_from_json(json::parse(R"({"scatter": {"k": "x"}})")), ConfigError);
    CHECK_THROWS_AS(run_config_from_json(json::parse(R"({"inversion": {"schedule": "x"}})")),
                    ConfigError);
    CHECK_THROWS_AS(run_config_from_json(json::parse(R"({"observations": 7})")), ConfigError);
    CHECK_THROWS_AS(read_run_config("/nonexistent/config.json"), ConfigError);
  }
}

TEST_CASE("model construction")
{
  GeometrySpec g;
  g.kind = "circle";
  g.radius = 0.3;
  const BoundaryCurve c = build_curve(g, 0.04);
  CHECK(c.size() == static_cast<std::size_t>(std::ceil(c.perimeter() / 0.04 - 1e-9)) +
                        (c.size() > std::ceil(c.perimeter() / 0.04) ? 1 : 0));
  CHECK(c.size() >= 16);
  g.nodes = 40;
  CHECK(build_curve(g, 0.04).size() == 40);

  ImpedanceSpec s;
  s.lambda.c0 = {0.0, 0.75};
  s.lambda.a = {0.0, {0.0, -0.25}};
  s.mu.c0 = 0.75;
  s.mu.a = {0.0, 0.25};
  const ImpedanceField imp = build_impedance(s, g, build_curve(g, 0.04));
  const BoundaryCurve cc = build_curve(g, 0.04);
  for (std::size_t i = 0; i < cc.size(); ++i)
  {
    const double th = std::atan2(cc[i].y, cc[i].x);
    CHECK(imp.lambda[static_cast<Eigen::Index>(i)].imag() ==
          doctest::Approx(0.5 * (1.0 + std::sin(th) * std::sin(th))));
    CHECK(imp.mu[static_cast<Eigen::Index>(i)].real() ==
          doctest::Approx(0.5 * (1.0 + std::cos(th) * std::cos(th))));
  }
  g.kind = "spiral";
  CHECK_THROWS_AS(build_curve(g, 0.04), ConfigError);
  s.kind = "file";
  s.file = "/nonexistent.csv";
  CHECK_THROWS_AS(build_impedance(s, GeometrySpec{}, cc), ConfigError);
}

TEST_CASE("synthetic data")
{
  RunConfig cfg = run_config_from_json(json::object());
  cfg.incident_count = 2;
  cfg.observations = 32;
  cfg.data_h = 0.05;
  cfg.noise = 0.05;
  const SyntheticData d = synthesize_data(cfg);
  CHECK(d.noisy.num_incident() == 2);
  CHECK(d.noisy.num_obs() == 32);
  for (std::size_t j = 0; j < 2; ++j)
  {
    CHECK(std::abs(relative_l2_error(d.noisy.samples[j], d.clean.samples[j]) - 0.05) < 1e-12);
  }
  const SyntheticData again = synthesize_data(cfg);
  CHECK((again.noisy.samples[1].array() == d.noisy.samples[1].array()).all());
}
