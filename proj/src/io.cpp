#include "gibc/io.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>

#include "gibc/errors.hpp"
#include "gibc/meshing.hpp"

namespace gibc
{

namespace
{

using nlohmann::json;
constexpr double pi = std::numbers::pi;

void check_keys(const json &j, std::initializer_list<const char *> allowed, const char *where)
{
  if (!j.is_object())
  {
    throw ConfigError(std::string(where) + ": expected an object");
  }
  for (const auto &[key, value] : j.items())
  {
    bool ok = false;
    for (const char *a : allowed)
    {
      ok = ok || key == a;
    }
    if (!ok)
    {
      throw ConfigError(std::string(where) + ": unknown key '" + key + "'");
    }
  }
}

template <class T>
void get(const json &j, const char *key, T &out)
{
  if (j.contains(key))
  {
    try
    {
      out = j.at(key).get<T>();
    }
    catch (const json::exception &e)
    {
      throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
    }
  }
}

cplx complex_from(const json &j)
{
  if (j.is_number())
  {
    return {j.get<double>(), 0.0};
  }
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
  {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw ConfigError("complex values are numbers or [re, im] pairs");
}

json complex_to(cplx z) { return json::array({z.real(), z.imag()}); }

std::vector<cplx> complex_list(const json &j)
{
  if (!j.is_array())
  {
    throw ConfigError("expected an array of complex values");
  }
  std::vector<cplx> out;
  for (const auto &v : j)
  {
    out.push_back(complex_from(v));
  }
  return out;
}

FourierProfile profile_from(const json &j)
{
  FourierProfile p;
  if (j.is_number() || j.is_array())
  {
    p.c0 = complex_from(j);
    return p;
  }
  check_keys(j, {"c0", "cos", "sin", "phase"}, "impedance profile");
  if (j.contains("c0"))
  {
    p.c0 = complex_from(j["c0"]);
  }
  if (j.contains("cos"))
  {
    p.a = complex_list(j["cos"]);
  }
  if (j.contains("sin"))
  {
    p.b = complex_list(j["sin"]);
  }
  get(j, "phase", p.phase);
  return p;
}

json profile_to(const FourierProfile &p)
{
  json a = json::array(), b = json::array();
  for (cplx z : p.a)
  {
    a.push_back(complex_to(z));
  }
  for (cplx z : p.b)
  {
    b.push_back(complex_to(z));
  }
  return {{"c0", complex_to(p.c0)}, {"cos", a}, {"sin", b}, {"phase", p.phase}};
}

ActiveSet active_from(const json &j)
{
  ActiveSet s;
  if (!j.is_array())
  {
    throw ConfigError("active: expected an array of component names");
  }
  for (const auto &v : j)
  {
    const std::string name = v.get<std::string>();
    if (name == "re_lambda")
    {
      s.re_lambda = true;
    }
    else if (name == "im_lambda")
    {
      s.im_lambda = true;
    }
    else if (name == "re_mu")
    {
      s.re_mu = true;
    }
    else if (name == "im_mu")
    {
      s.im_mu = true;
    }
    else
    {
      throw ConfigError("active: unknown component '" + name + "'");
    }
  }
  return s;
}

json active_to(const ActiveSet &s)
{
  json out = json::array();
  if (s.re_lambda)
  {
    out.push_back("re_lambda");
  }
  if (s.im_lambda)
  {
    out.push_back("im_lambda");
  }
  if (s.re_mu)
  {
    out.push_back("re_mu");
  }
  if (s.im_mu)
  {
    out.push_back("im_mu");
  }
  return out;
}

ModelSpec model_from(const json &j)
{
  check_keys(j, {"geometry", "impedance"}, "model");
  ModelSpec m;
  if (j.contains("geometry"))
  {
    const json &g = j["geometry"];
    check_keys(g, {"kind", "radius", "radius_b", "center", "cos", "sin", "file", "nodes"},
               "geometry");
    get(g, "kind", m.geometry.kind);
    get(g, "radius", m.geometry.radius);
    get(g, "radius_b", m.geometry.radius_b);
    if (g.contains("center"))
    {
      const cplx c = complex_from(g["center"]);
      m.geometry.center = {c.real(), c.imag()};
    }
    get(g, "cos", m.geometry.cos_n);
    get(g, "sin", m.geometry.sin_n);
    get(g, "file", m.geometry.file);
    get(g, "nodes", m.geometry.nodes);
  }
  if (j.contains("impedance"))
  {
    const json &i = j["impedance"];
    check_keys(i, {"kind", "lambda", "mu", "file", "active"}, "impedance");
    get(i, "kind", m.impedance.kind);
    if (i.contains("lambda"))
    {
      m.impedance.lambda = profile_from(i["lambda"]);
    }
    if (i.contains("mu"))
    {
      m.impedance.mu = profile_from(i["mu"]);
    }
    get(i, "file", m.impedance.file);
    if (i.contains("active"))
    {
      m.impedance.active = active_from(i["active"]);
    }
  }
  return m;
}

json model_to(const ModelSpec &m)
{
  const GeometrySpec &g = m.geometry;
  return {{"geometry",
           {{"kind", g.kind},
            {"radius", g.radius},
            {"radius_b", g.radius_b},
            {"center", json::array({g.center.x, g.center.y})},
            {"cos", g.cos_n},
            {"sin", g.sin_n},
            {"file", g.file},
            {"nodes", g.nodes}}},
          {"impedance",
           {{"kind", m.impedance.kind},
            {"lambda", profile_to(m.impedance.lambda)},
            {"mu", profile_to(m.impedance.mu)},
            {"file", m.impedance.file},
            {"active", active_to(m.impedance.active)}}}};
}

Schedule schedule_from(const std::string &s)
{
  if (s == "shape")
  {
    return Schedule::ShapeOnly;
  }
  if (s == "impedance")
  {
    return Schedule::ImpedanceOnly;
  }
  if (s == "alternating")
  {
    return Schedule::Alternating;
  }
  throw ConfigError("schedule must be shape, impedance or alternating");
}

const char *schedule_name(Schedule s)
{
  switch (s)
  {
  case Schedule::ShapeOnly:
    return "shape";
  case Schedule::ImpedanceOnly:
    return "impedance";
  case Schedule::Alternating:
    break;
  }
  return "alternating";
}

std::filesystem::path resolve(const std::filesystem::path &base, const std::string &file)
{
  const std::filesystem::path p(file);
  return p.is_relative() && !base.empty() ? base / p : p;
}

BoundaryCurve shape_with(const GeometrySpec &spec, std::size_t n,
                         const std::filesystem::path &base)
{
  if (spec.kind == "circle")
  {
    return make_circle(spec.radius, n, spec.center);
  }
  if (spec.kind == "ellipse")
  {
    return make_ellipse(spec.radius, spec.radius_b, n, spec.center);
  }
  if (spec.kind == "polar")
  {
    auto r = [&spec](double t) {
      double v = spec.radius;
      for (std::size_t m = 0; m < spec.cos_n.size(); ++m)
      {
        v += spec.cos_n[m] * std::cos(static_cast<double>(m + 1) * t);
      }
      for (std::size_t m = 0; m < spec.sin_n.size(); ++m)
      {
        v += spec.sin_n[m] * std::sin(static_cast<double>(m + 1) * t);
      }
      return v;
    };
    return make_polar(r, n, spec.center);
  }
  if (spec.kind == "lshape")
  {
    return make_l_shape(spec.radius, n, spec.center);
  }
  if (spec.kind == "file")
  {
    std::ifstream is(resolve(base, spec.file));
    if (!is)
    {
      throw ConfigError("cannot open curve file " + spec.file);
    }
    const BoundaryCurve c = read_curve_csv(is);
    return n == c.size() ? c : resample(c, n);
  }
  throw ConfigError("unknown geometry kind '" + spec.kind + "'");
}

}  // namespace

cplx FourierProfile::operator()(double theta) const
{
  cplx v = c0;
  for (std::size_t m = 0; m < a.size(); ++m)
  {
    v += a[m] * std::cos(static_cast<double>(m + 1) * (theta + phase));
  }
  for (std::size_t m = 0; m < b.size(); ++m)
  {
    v += b[m] * std::sin(static_cast<double>(m + 1) * (theta + phase));
  }
  return v;
}

std::vector<double> RunConfig::incident_angles() const
{
  std::vector<double> out(incident_count);
  for (std::size_t j = 0; j < incident_count; ++j)
  {
    out[j] = incident_offset + 2.0 * pi * static_cast<double>(j) / static_cast<double>(incident_count);
  }
  return out;
}

RunConfig run_config_from_json(const json &j)
{
  check_keys(j,
             {"scatter", "incident_count", "incident_offset", "observations", "noise", "seed",
              "data_h", "truth", "initial", "inversion", "data", "validate"},
             "config");
  RunConfig c;
  if (j.contains("scatter"))
  {
    const json &s = j["scatter"];
    check_keys(s, {"k", "radius", "h", "fe_order", "n_dtn", "dimensionless", "mesh_seed", "threads"},
               "scatter");
    get(s, "k", c.scatter.k);
    get(s, "radius", c.scatter.radius);
    get(s, "h", c.scatter.h);
    get(s, "fe_order", c.scatter.fe_order);
    get(s, "n_dtn", c.scatter.n_dtn);
    get(s, "dimensionless", c.scatter.dimensionless);
    get(s, "mesh_seed", c.scatter.mesh_seed);
    get(s, "threads", c.scatter.threads);
  }
  get(j, "incident_count", c.incident_count);
  get(j, "incident_offset", c.incident_offset);
  get(j, "observations", c.observations);
  get(j, "noise", c.noise);
  get(j, "seed", c.seed);
  get(j, "data_h", c.data_h);
  if (j.contains("truth"))
  {
    c.truth = model_from(j["truth"]);
  }
  if (j.contains("initial"))
  {
    c.initial = model_from(j["initial"]);
  }
  if (j.contains("inversion"))
  {
    const json &v = j["inversion"];
    check_keys(v,
               {"schedule", "constant_impedance", "rho_up", "rho_down", "rho_eta",
                "alpha_min_factor", "max_iterations", "alpha_shape", "alpha_impedance",
                "eta_shape", "eta_impedance", "eta_floor", "shape_step_fraction",
                "impedance_step_fraction", "max_edge_ratio", "mu_floor", "write_gradients"},
               "inversion");
    InversionConfig &i = c.inversion;
    if (v.contains("schedule"))
    {
      i.schedule = schedule_from(v["schedule"].get<std::string>());
    }
    get(v, "constant_impedance", i.constant_impedance);
    get(v, "rho_up", i.rho_up);
    get(v, "rho_down", i.rho_down);
    get(v, "rho_eta", i.rho_eta);
    get(v, "alpha_min_factor", i.alpha_min_factor);
    get(v, "max_iterations", i.max_iterations);
    get(v, "alpha_shape", i.alpha_shape);
    get(v, "alpha_impedance", i.alpha_impedance);
    get(v, "eta_shape", i.eta_shape);
    get(v, "eta_impedance", i.eta_impedance);
    get(v, "eta_floor", i.eta_floor);
    get(v, "shape_step_fraction", i.shape_step_fraction);
    get(v, "impedance_step_fraction", i.impedance_step_fraction);
    get(v, "max_edge_ratio", i.max_edge_ratio);
    get(v, "mu_floor", i.mu_floor);
    get(v, "write_gradients", i.write_gradients);
  }
  get(j, "data", c.data);
  if (j.contains("validate"))
  {
    const json &v = j["validate"];
    check_keys(v, {"directions", "steps", "h"}, "validate");
    get(v, "directions", c.validate_directions);
    get(v, "steps", c.validate_steps);
    get(v, "h", c.validate_h);
  }

  c.scatter.validate();
  if (c.incident_count == 0 || c.observations < 4 || c.observations % 2 != 0)
  {
    throw ConfigError("need at least one incident field and an even observation count >= 4");
  }
  if (!(c.noise >= 0.0) || !(c.data_h > 0.0) || !(c.validate_h > 0.0))
  {
    throw ConfigError("noise must be >= 0 and mesh sizes positive");
  }
  const InversionConfig &i = c.inversion;
  if (!(i.rho_up > 1.0) || !(i.rho_down > 1.0) || !(i.rho_eta >= 1.0) || i.max_iterations < 0 ||
      !(i.alpha_min_factor > 0.0))
  {
    throw ConfigError("inversion step constants out of range");
  }
  return c;
}

json to_json(const RunConfig &c)
{
  const InversionConfig &i = c.inversion;
  return {{"scatter",
           {{"k", c.scatter.k},
            {"radius", c.scatter.radius},
            {"h", c.scatter.h},
            {"fe_order", c.scatter.fe_order},
            {"n_dtn", c.scatter.dtn_modes()},
            {"dimensionless", c.scatter.dimensionless},
            {"mesh_seed", c.scatter.mesh_seed},
            {"threads", c.scatter.threads}}},
          {"incident_count", c.incident_count},
          {"incident_offset", c.incident_offset},
          {"observations", c.observations},
          {"noise", c.noise},
          {"seed", c.seed},
          {"data_h", c.data_h},
          {"truth", model_to(c.truth)},
          {"initial", model_to(c.initial)},
          {"inversion",
           {{"schedule", schedule_name(i.schedule)},
            {"constant_impedance", i.constant_impedance},
            {"rho_up", i.rho_up},
            {"rho_down", i.rho_down},
            {"rho_eta", i.rho_eta},
            {"alpha_min_factor", i.alpha_min_factor},
            {"max_iterations", i.max_iterations},
            {"alpha_shape", i.alpha_shape},
            {"alpha_impedance", i.alpha_impedance},
            {"eta_shape", i.eta_shape},
            {"eta_impedance", i.eta_impedance},
            {"eta_floor", i.eta_floor},
            {"shape_step_fraction", i.shape_step_fraction},
            {"impedance_step_fraction", i.impedance_step_fraction},
            {"max_edge_ratio", i.max_edge_ratio},
            {"mu_floor", i.mu_floor},
            {"write_gradients", i.write_gradients}}},
          {"data", c.data},
          {"validate",
           {{"directions", c.validate_directions},
            {"steps", c.validate_steps},
            {"h", c.validate_h}}}};
}

RunConfig read_run_config(const std::filesystem::path &path)
{
  std::ifstream is(path);
  if (!is)
  {
    throw ConfigError("cannot open config " + path.string());
  }
  json j;
  try
  {
    is >> j;
  }
  catch (const json::exception &e)
  {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  return run_config_from_json(j);
}

BoundaryCurve build_curve(const GeometrySpec &spec, double h, const std::filesystem::path &base)
{
  if (spec.nodes != 0)
  {
    return shape_with(spec, spec.nodes, base);
  }
  const double perimeter = shape_with(spec, 512, base).perimeter();
  const auto n = std::max<std::size_t>(16, static_cast<std::size_t>(std::ceil(perimeter / h)));
  return shape_with(spec, n, base);
}

ImpedanceField build_impedance(const ImpedanceSpec &spec, const GeometrySpec &geometry,
                               const BoundaryCurve &curve, const std::filesystem::path &base)
{
  ImpedanceField imp;
  if (spec.kind == "file")
  {
    std::ifstream is(resolve(base, spec.file));
    if (!is)
    {
      throw ConfigError("cannot open impedance file " + spec.file);
    }
    imp = read_impedance_csv(is);
    if (imp.size() != curve.size())
    {
      throw MeshMismatch("impedance table size differs from the curve node count");
    }
  }
  else if (spec.kind == "fourier")
  {
    const auto theta = polar_angles(curve, geometry.center);
    imp = ImpedanceField::constant(curve.size(), 0.0, 0.0);
    for (std::size_t i = 0; i < curve.size(); ++i)
    {
      imp.lambda[static_cast<Eigen::Index>(i)] = spec.lambda(theta[i]);
      imp.mu[static_cast<Eigen::Index>(i)] = spec.mu(theta[i]);
    }
  }
  else
  {
    throw ConfigError("unknown impedance kind '" + spec.kind + "'");
  }
  imp.active = spec.active;
  return imp;
}

FarField add_noise(const FarField &clean, double delta, std::uint64_t seed)
{
  FarField out = clean;
  if (delta == 0.0)
  {
    return out;
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  for (auto &s : out.samples)
  {
    Eigen::VectorXcd c(s.size());
    for (Eigen::Index n = 0; n < c.size(); ++n)
    {
      const double re = normal(rng);
      c[n] = cplx(re, normal(rng));
    }
    const Eigen::VectorXcd noise = samples_from_fourier(c);
    s += (delta * l2_norm(s) / l2_norm(noise)) * noise;
  }
  return out;
}

SyntheticData synthesize_data(const RunConfig &cfg, const std::filesystem::path &base)
{
  ScatterConfig scfg = cfg.scatter;
  scfg.h = cfg.data_h;
  SyntheticData d;
  d.curve = build_curve(cfg.truth.geometry, scfg.h, base);
  d.imp = build_impedance(cfg.truth.impedance, cfg.truth.geometry, d.curve, base);
  const AnnulusMesh mesh = triangulate(d.curve, scfg.radius, scfg.h, scfg.mesh_seed);
  const ScatterSolver solver(scfg, mesh, d.imp);
  std::vector<IncidentField> inc;
  for (double a : cfg.incident_angles())
  {
    inc.push_back(plane_wave(a));
  }
  d.clean = solver.far_field(solver.solve(inc), cfg.observations);
  d.noisy = add_noise(d.clean, cfg.noise, cfg.seed);
  return d;
}

}  // namespace gibc
