#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <string>
#include <vector>

#include "gibc/io.hpp"
#include "gibc/meshing.hpp"
#include "gibc/oracle.hpp"
#include "gibc/validate.hpp"

namespace fs = std::filesystem;
using namespace gibc;

namespace
{

using Clock = std::chrono::steady_clock;

std::vector<CheckResult> results;

void report(const std::string &name, double value, double tol, bool pass)
{
  results.push_back({name, value, tol, pass});
  print_check(std::cout, results.back());
  std::cout.flush();
}

void report_max(const std::string &name, double value, double tol)
{
  report(name, value, tol, value <= tol);
}

void report_min(const std::string &name, double value, double tol)
{
  report(name, value, tol, value >= tol);
}

double seconds_since(Clock::time_point t0)
{
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

RunConfig config(const std::string &name)
{
  return read_run_config(fs::path(GIBC_CONFIG_DIR) / name);
}

struct Inversion
{
  InversionHistory history;
  double seconds;
};

Inversion invert(const RunConfig &cfg)
{
  const auto t0 = Clock::now();
  const SyntheticData d = synthesize_data(cfg);
  const BoundaryCurve c0 = build_curve(cfg.initial.geometry, cfg.scatter.h);
  const ImpedanceField i0 = build_impedance(cfg.initial.impedance, cfg.initial.geometry, c0);
  InversionHistory h = run_inversion(cfg.scatter, cfg.inversion, d.noisy, c0, i0);
  const double s = seconds_since(t0);
  std::printf("  run: Error %.4f after %d iterations (%d accepted, %s) in %.0f s\n",
              h.final_state.cost.error, h.final_state.iteration, h.accepted,
              h.stop_reason.c_str(), s);
  return {std::move(h), s};
}

void forward_accuracy()
{
  const RunConfig cfg = config("circle.json");
  const GeometrySpec &g = cfg.truth.geometry;
  const ImpedanceSpec &imp = cfg.truth.impedance;
  const FarField oracle = circle_series(g.radius, imp.lambda.c0, imp.mu.c0, cfg.scatter.k,
                                        cfg.scatter.dimensionless, cfg.incident_angles(),
                                        cfg.observations);
  double err[2];
  double runtime = 0.0;
  for (int r = 0; r < 2; ++r)
  {
    const auto t0 = Clock::now();
    ScatterConfig sc = cfg.scatter;
    sc.h = 0.02 / (r + 1);
    sc.fe_order = 2;
    const BoundaryCurve curve = build_curve(g, sc.h);
    const ScatterSolver s(sc, triangulate(curve, sc.radius, sc.h, sc.mesh_seed),
                          build_impedance(imp, g, curve));
    std::vector<IncidentField> inc;
    for (double a : cfg.incident_angles())
    {
      inc.push_back(plane_wave(a));
    }
    err[r] = oracle_farfield_compare(s.far_field(s.solve(inc), cfg.observations), oracle);
    if (r == 0)
    {
      runtime = seconds_since(t0);
    }
  }
  report_max("c1_forward_error_h0.02", err[0], 1e-2);
  report_min("c1_forward_order", std::log2(err[0] / err[1]), 1.8);
  report_max("c1_forward_runtime_s", runtime, 60.0);
}

void validation()
{
  const RunConfig cfg = config("circle.json");
  const std::vector<CheckResult> checks =
      run_validation(cfg.scatter, cfg.validate_directions, cfg.validate_steps, cfg.validate_h,
                     cfg.seed);
  const std::map<std::string, std::string> prefix = {
      {"reciprocity", "c2_"},        {"impedance_fd", "c3_"}, {"shape_fd", "c3_"},
      {"tangential_ratio", "c3_"}, {"weak_strong", "c4_"}};
  for (const auto &c : checks)
  {
    for (const auto &[key, p] : prefix)
    {
      if (c.name.rfind(key, 0) == 0)
      {
        report(p + c.name, c.value, c.tolerance, c.pass);
      }
    }
  }
}

void constant_impedance()
{
  const RunConfig cfg = config("constant_impedance.json");
  const Inversion r = invert(cfg);
  const DescentState &s = r.history.final_state;
  const cplx lam = cfg.truth.impedance.lambda.c0, mu = cfg.truth.impedance.mu.c0;
  report_max("c5_lambda_deviation", (s.imp.lambda.array() - lam).abs().maxCoeff(), 0.05);
  report_max("c5_mu_deviation", (s.imp.mu.array() - mu).abs().maxCoeff(), 0.1);
  report_max("c5_final_error", s.cost.error, 1.5 * cfg.noise);
  report_max("c5_runtime_s", r.seconds, 1800.0);
}

void lshape()
{
  const RunConfig good = config("lshape_known.json");
  report_max("c6_lshape_good_guess_error", invert(good).history.final_state.cost.error,
             1.5 * good.noise);
  const RunConfig bad = config("lshape_bad_guess.json");
  const double e = invert(bad).history.final_state.cost.error;
  std::printf("INFO c6_lshape_bad_guess_error value=%.4g (a stall at >= %.3g is permitted)\n", e,
              3.0 * bad.noise);
}

void trefoil()
{
  const RunConfig cfg = config("trefoil.json");
  const Inversion r = invert(cfg);
  const DescentState &s = r.history.final_state;
  report_max("c7_final_error", s.cost.error, 1.5 * cfg.noise);

  // Fraction of boundary length where both recovered components are within 0.2 of the truth
  // at the same polar angle.
  const Vec2 c = cfg.truth.geometry.center;
  const std::size_t n = s.curve.size();
  double good = 0.0, total = 0.0;
  for (std::size_t i = 0; i < n; ++i)
  {
    const double w = 0.5 * (s.curve.edge_length(i) + s.curve.edge_length((i + n - 1) % n));
    const double th = std::atan2(s.curve[i].y - c.y, s.curve[i].x - c.x);
    const auto ii = static_cast<Eigen::Index>(i);
    const double dl = std::abs(s.imp.lambda[ii].imag() - cfg.truth.impedance.lambda(th).imag());
    const double dm = std::abs(s.imp.mu[ii].real() - cfg.truth.impedance.mu(th).real());
    total += w;
    if (dl <= 0.2 && dm <= 0.2)
    {
      good += w;
    }
  }
  report_min("c7_impedance_within_0.2_fraction", good / total, 0.8);
}

std::map<std::string, std::string> directory_contents(const fs::path &dir)
{
  std::map<std::string, std::string> out;
  for (const auto &e : fs::recursive_directory_iterator(dir))
  {
    if (e.is_regular_file())
    {
      std::ifstream is(e.path(), std::ios::binary);
      out[fs::relative(e.path(), dir).string()] =
          std::string(std::istreambuf_iterator<char>(is), {});
    }
  }
  return out;
}

int run(const std::string &args)
{
  const std::string cmd = std::string("\"") + GIBC_CLI + "\" " + args + " > /dev/null";
  return std::system(cmd.c_str());
}

void determinism()
{
  const fs::path root = fs::absolute("acceptance_determinism");
  fs::remove_all(root);
  fs::create_directories(root);
  nlohmann::json j = to_json(config("constant_impedance.json"));
  j["inversion"]["max_iterations"] = 6;
  std::ofstream(root / "config.json") << j.dump(2) << '\n';
  const std::string cfg = "--config \"" + (root / "config.json").string() + "\" --threads 1";
  bool ok = run("synthesize " + cfg + " --out \"" + (root / "data").string() + "\"") == 0;
  const std::string data = " --data \"" + (root / "data" / "data.csv").string() + "\"";
  ok = ok && run("invert " + cfg + data + " --out \"" + (root / "a").string() + "\"") == 0;
  ok = ok && run("invert " + cfg + data + " --out \"" + (root / "b").string() + "\"") == 0;
  std::size_t files = 0;
  if (ok)
  {
    const auto a = directory_contents(root / "a");
    const auto b = directory_contents(root / "b");
    files = a.size();
    ok = !a.empty() && a == b;
  }
  report("c8_identical_run_directories", static_cast<double>(files), 0.0, ok);
}

}  // namespace

int main()
{
  std::cout << "criterion 1: forward accuracy\n";
  forward_accuracy();
  std::cout << "criteria 2-4: reciprocity, gradients, weak/strong consistency\n";
  validation();
  std::cout << "criterion 5: constant impedance recovery\n";
  constant_impedance();
  std::cout << "criterion 6: known impedance shape recovery\n";
  lshape();
  std::cout << "criterion 7: joint recovery on the trefoil\n";
  trefoil();
  std::cout << "criterion 8: determinism\n";
  determinism();

  int failed = 0;
  for (const auto &r : results)
  {
    failed += r.pass ? 0 : 1;
  }
  std::printf("%zu checks, %d failed\n", results.size(), failed);
  return failed == 0 ? 0 : 1;
}
