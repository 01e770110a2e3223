#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "gibc/csv.hpp"
#include "gibc/errors.hpp"
#include "gibc/io.hpp"
#include "gibc/meshing.hpp"
#include "gibc/oracle.hpp"
#include "gibc/validate.hpp"

namespace fs = std::filesystem;
using namespace gibc;

namespace
{

struct Options
{
  std::string config;
  std::string out = "run";
  std::string data;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
};

void absolutize(std::string &file, const fs::path &base)
{
  if (!file.empty() && fs::path(file).is_relative())
  {
    file = fs::absolute(base / file).lexically_normal().string();
  }
}

RunConfig load(const Options &o)
{
  RunConfig cfg = read_run_config(o.config);
  const fs::path base = fs::absolute(o.config).parent_path();
  if (o.seed)
  {
    cfg.seed = *o.seed;
  }
  if (o.threads)
  {
    cfg.scatter.threads = *o.threads;
  }
  if (!o.data.empty())
  {
    cfg.data = fs::absolute(o.data).string();
  }
  absolutize(cfg.data, base);
  absolutize(cfg.truth.geometry.file, base);
  absolutize(cfg.truth.impedance.file, base);
  absolutize(cfg.initial.geometry.file, base);
  absolutize(cfg.initial.impedance.file, base);
  return cfg;
}

fs::path prepare(const Options &o, const RunConfig &cfg)
{
  const fs::path dir(o.out);
  fs::create_directories(dir);
  std::ofstream os(dir / "config.json");
  os << to_json(cfg).dump(2) << '\n';
  return dir;
}

template <class Fn>
void write(const fs::path &path, Fn fn)
{
  std::ofstream os(path);
  if (!os)
  {
    throw ConfigError("cannot write " + path.string());
  }
  fn(os);
}

std::vector<IncidentField> plane_waves(const RunConfig &cfg)
{
  std::vector<IncidentField> inc;
  for (double a : cfg.incident_angles())
  {
    inc.push_back(plane_wave(a));
  }
  return inc;
}

int cmd_forward(const Options &o)
{
  const RunConfig cfg = load(o);
  const fs::path dir = prepare(o, cfg);
  const BoundaryCurve curve = build_curve(cfg.truth.geometry, cfg.scatter.h);
  const ImpedanceField imp = build_impedance(cfg.truth.impedance, cfg.truth.geometry, curve);
  const ScatterSolver solver(cfg.scatter,
                             triangulate(curve, cfg.scatter.radius, cfg.scatter.h,
                                         cfg.scatter.mesh_seed),
                             imp);
  const std::vector<IncidentField> inc = plane_waves(cfg);
  const FarField ff = solver.far_field(solver.solve(inc), cfg.observations);
  write(dir / "farfield.csv", [&](std::ostream &os) { write_farfield_csv(os, ff); });
  write(dir / "curve.csv", [&](std::ostream &os) { write_curve_csv(os, curve); });
  write(dir / "impedance.csv", [&](std::ostream &os) { write_impedance_csv(os, imp); });
  std::printf("forward: %zu far fields, %zu dofs\n", ff.num_incident(), solver.num_dofs());
  return 0;
}

int cmd_oracle(const Options &o)
{
  const RunConfig cfg = load(o);
  const GeometrySpec &g = cfg.truth.geometry;
  const ImpedanceSpec &i = cfg.truth.impedance;
  const bool constant = i.kind == "fourier" && i.lambda.a.empty() && i.lambda.b.empty() &&
                        i.mu.a.empty() && i.mu.b.empty();
  if (g.kind != "circle" || g.center.x != 0.0 || g.center.y != 0.0 || !constant)
  {
    throw ConfigError("oracle needs a circle centered at the origin with constant impedances");
  }
  const fs::path dir = prepare(o, cfg);
  const FarField oracle = circle_series(g.radius, i.lambda.c0, i.mu.c0, cfg.scatter.k,
                                        cfg.scatter.dimensionless, cfg.incident_angles(),
                                        cfg.observations);
  write(dir / "oracle_farfield.csv", [&](std::ostream &os) { write_farfield_csv(os, oracle); });

  const BoundaryCurve curve = build_curve(g, cfg.scatter.h);
  const ImpedanceField imp = build_impedance(i, g, curve);
  const ScatterSolver solver(cfg.scatter,
                             triangulate(curve, cfg.scatter.radius, cfg.scatter.h,
                                         cfg.scatter.mesh_seed),
                             imp);
  const std::vector<IncidentField> inc = plane_waves(cfg);
  const FarField fem = solver.far_field(solver.solve(inc), cfg.observations);
  write(dir / "farfield.csv", [&](std::ostream &os) { write_farfield_csv(os, fem); });
  write(dir / "comparison.csv", [&](std::ostream &os) {
    os << "incident_index,relative_l2_error\n";
    for (std::size_t j = 0; j < fem.num_incident(); ++j)
    {
      os << j << ',' << csv::format(relative_l2_error(fem.samples[j], oracle.samples[j])) << '\n';
    }
  });
  std::printf("oracle: relative far field error %.3e\n", oracle_farfield_compare(fem, oracle));
  return 0;
}

int cmd_synthesize(const Options &o)
{
  const RunConfig cfg = load(o);
  const fs::path dir = prepare(o, cfg);
  const SyntheticData d = synthesize_data(cfg);
  write(dir / "data.csv", [&](std::ostream &os) { write_farfield_csv(os, d.noisy); });
  write(dir / "clean.csv", [&](std::ostream &os) { write_farfield_csv(os, d.clean); });
  write(dir / "truth_curve.csv", [&](std::ostream &os) { write_curve_csv(os, d.curve); });
  write(dir / "truth_impedance.csv", [&](std::ostream &os) { write_impedance_csv(os, d.imp); });
  std::printf("synthesize: %zu far fields, noise %.3g, relative deviation %.6g\n",
              d.noisy.num_incident(), cfg.noise, relative_l2_error(d.noisy, d.clean));
  return 0;
}

int cmd_invert(const Options &o)
{
  const RunConfig cfg = load(o);
  if (cfg.data.empty())
  {
    throw ConfigError("invert needs a data file (--data or \"data\" in the config)");
  }
  std::ifstream is(cfg.data);
  if (!is)
  {
    throw ConfigError("cannot open data file " + cfg.data);
  }
  const FarField data = read_farfield_csv(is);
  if (std::abs(data.k - cfg.scatter.k) > 1e-12 * cfg.scatter.k)
  {
    throw ConfigError("data wavenumber differs from the configured k");
  }
  const fs::path dir = prepare(o, cfg);
  const BoundaryCurve curve = build_curve(cfg.initial.geometry, cfg.scatter.h);
  const ImpedanceField imp =
      build_impedance(cfg.initial.impedance, cfg.initial.geometry, curve);
  const InversionHistory h =
      run_inversion(cfg.scatter, cfg.inversion, data, curve, imp, RunOutput{dir});
  std::printf("invert: F %.6g -> %.6g, Error %.4g -> %.4g, %d accepted steps (%s)\n",
              h.initial_cost.F, h.final_state.cost.F, h.initial_cost.error,
              h.final_state.cost.error, h.accepted, h.stop_reason.c_str());
  return 0;
}

int cmd_validate(const Options &o)
{
  const RunConfig cfg = load(o);
  const fs::path dir = prepare(o, cfg);
  const std::vector<CheckResult> checks = run_validation(
      cfg.scatter, cfg.validate_directions, cfg.validate_steps, cfg.validate_h, cfg.seed);
  bool ok = true;
  write(dir / "validation.csv", [&](std::ostream &os) {
    os << "check,value,tolerance,pass\n";
    for (const auto &c : checks)
    {
      os << c.name << ',' << csv::format(c.value) << ',' << csv::format(c.tolerance) << ','
         << (c.pass ? 1 : 0) << '\n';
    }
  });
  for (const auto &c : checks)
  {
    print_check(std::cout, c);
    ok = ok && c.pass;
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{"Inverse obstacle scattering with generalized impedance boundary conditions"};
  app.require_subcommand(1);
  Options o;
  auto add_common = [&o](CLI::App *sub) {
    sub->add_option("--config", o.config, "JSON run configuration")->required();
    sub->add_option("--out", o.out, "output directory");
    sub->add_option("--seed", o.seed, "noise and direction seed");
    sub->add_option("--threads", o.threads, "threads for solves over incident fields");
  };
  CLI::App *forward = app.add_subcommand("forward", "far fields of the truth model");
  CLI::App *oracle = app.add_subcommand("oracle", "series solution for a circle and comparison");
  CLI::App *synth = app.add_subcommand("synthesize", "noisy synthetic far field data");
  CLI::App *invert = app.add_subcommand("invert", "reconstruct shape and impedances");
  CLI::App *validate = app.add_subcommand("validate", "gradient and reciprocity checks");
  for (CLI::App *s : {forward, oracle, synth, invert, validate})
  {
    add_common(s);
  }
  invert->add_option("--data", o.data, "far field CSV (overrides the config)");

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError &e)
  {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try
  {
    if (*forward)
    {
      return cmd_forward(o);
    }
    if (*oracle)
    {
      return cmd_oracle(o);
    }
    if (*synth)
    {
      return cmd_synthesize(o);
    }
    if (*invert)
    {
      return cmd_invert(o);
    }
    return cmd_validate(o);
  }
  catch (const ConfigError &e)
  {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  }
  catch (const std::exception &e)
  {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
