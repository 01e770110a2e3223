#include "gibc/inversion.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <ostream>

#include "gibc/csv.hpp"
#include "gibc/errors.hpp"

namespace gibc
{

namespace
{

constexpr double pi = std::numbers::pi;

std::string numbered(const char *stem, int it, const char *ext)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_%04d.%s", stem, it, ext);
  return buf;
}

void write_snapshot(const RunOutput &out, int it, const DescentState &s)
{
  std::ofstream c(out.directory / numbered("curve", it, "csv"));
  write_curve_csv(c, s.curve);
  std::ofstream i(out.directory / numbered("impedance", it, "csv"));
  write_impedance_csv(i, s.imp);
}

double max_abs(const Eigen::VectorXd &v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

// Curve passed to the mesher: resampled with impedances carried over by position when an
// edge has drifted away from the mesh size or adjacent edges have become too uneven.
void regularize(BoundaryCurve &curve, ImpedanceField &imp, double h, double max_ratio)
{
  double lmin = 1e300, lmax = 0.0;
  for (std::size_t e = 0; e < curve.size(); ++e)
  {
    lmin = std::min(lmin, curve.edge_length(e));
    lmax = std::max(lmax, curve.edge_length(e));
  }
  if (max_adjacent_edge_ratio(curve) <= max_ratio && lmax <= 1.5 * h && lmin >= h / 3.0)
  {
    return;
  }
  const auto n = std::max<std::size_t>(16, static_cast<std::size_t>(std::ceil(curve.perimeter() / h)));
  const BoundaryCurve next = resample(curve, n);
  imp.lambda = interpolate_onto(curve, imp.lambda, next);
  imp.mu = interpolate_onto(curve, imp.mu, next);
  curve = next;
}

Eigen::VectorXd smoothed_step(const BoundaryCurve &curve, const Eigen::VectorXd &load,
                              double alpha, double eta, bool constant)
{
  if (constant)
  {
    return Eigen::VectorXd::Constant(load.size(), -alpha * load.sum() / curve.perimeter());
  }
  return h1_smooth(curve, eta, -alpha * load);
}

// Largest nodal change of a unit impedance step over the active components.
double impedance_step_amplitude(const BoundaryCurve &curve, const ActiveSet &active,
                                const ImpedanceGradient &g, double eta, bool constant)
{
  double amp = 0.0;
  auto add = [&](bool on, const Eigen::VectorXd &load) {
    if (on)
    {
      amp = std::max(amp, max_abs(smoothed_step(curve, load, 1.0, eta, constant)));
    }
  };
  add(active.re_lambda, g.re_lambda);
  add(active.im_lambda, g.im_lambda);
  add(active.re_mu, g.re_mu);
  add(active.im_mu, g.im_mu);
  return amp;
}

struct Trial
{
  DescentState state;
  ScatterSolver solver;
  Evaluation eval;
};

}  // namespace

CostValue cost(const FarField &computed, const FarField &data)
{
  if (computed.num_incident() != data.num_incident())
  {
    throw MeshMismatch("cost: incident counts differ");
  }
  CostValue c;
  for (std::size_t j = 0; j < data.num_incident(); ++j)
  {
    if (computed.samples[j].size() != data.samples[j].size())
    {
      throw MeshMismatch("cost: sample counts differ");
    }
    const double r = l2_norm(computed.samples[j] - data.samples[j]);
    c.F += 0.5 * r * r;
    c.error += r / l2_norm(data.samples[j]);
  }
  c.error /= static_cast<double>(std::max<std::size_t>(1, data.num_incident()));
  return c;
}

Evaluation evaluate(const ScatterSolver &solver, const FarField &data)
{
  std::vector<IncidentField> inc;
  for (double a : data.incident_angles)
  {
    if (!std::isfinite(a))
    {
      throw ConfigError("data incident angles must be finite plane wave directions");
    }
    inc.push_back(plane_wave(a));
  }
  Evaluation e;
  e.states = solver.solve(inc);
  e.computed = solver.far_field(e.states, data.num_obs());
  e.cost = cost(e.computed, data);
  for (std::size_t j = 0; j < inc.size(); ++j)
  {
    e.residuals.push_back(e.computed.samples[j] - data.samples[j]);
  }
  return e;
}

Gradients compute_gradients(const ScatterSolver &solver, const Evaluation &eval)
{
  std::vector<IncidentField> adj;
  for (const auto &r : eval.residuals)
  {
    adj.push_back(adjoint_incident(r, solver.config().k));
  }
  const auto adjoints = solver.solve(adj);
  return {shape_gradient(solver, eval.states, adjoints),
          impedance_gradient(solver, eval.states, adjoints)};
}

Perturbation shape_step(const BoundaryCurve &curve, const ShapeGradient &g, double alpha,
                        double eta_tau, double eta_nu)
{
  return {h1_smooth(curve, eta_tau, -alpha * g.tangential),
          h1_smooth(curve, eta_nu, -alpha * g.normal)};
}

ImpedanceField impedance_step(const BoundaryCurve &curve, const ImpedanceField &imp,
                              const ImpedanceGradient &g, double alpha, double eta,
                              bool constant, double mu_floor)
{
  auto step = [&](const Eigen::VectorXd &load) {
    return smoothed_step(curve, load, alpha, eta, constant);
  };
  ImpedanceField out = imp;
  const cplx I{0.0, 1.0};
  if (imp.active.re_lambda)
  {
    out.lambda += step(g.re_lambda).cast<cplx>();
  }
  if (imp.active.im_lambda)
  {
    out.lambda += I * step(g.im_lambda).cast<cplx>();
  }
  if (imp.active.re_mu)
  {
    out.mu += step(g.re_mu).cast<cplx>();
  }
  if (imp.active.im_mu)
  {
    out.mu += I * step(g.im_mu).cast<cplx>();
  }
  return project_admissible(out, mu_floor);
}

void update_step(double &alpha, double &eta_a, double &eta_b, bool accepted,
                 const InversionConfig &cfg)
{
  if (accepted)
  {
    alpha *= cfg.rho_up;
    eta_a /= cfg.rho_eta;
    eta_b /= cfg.rho_eta;
  }
  else
  {
    alpha /= cfg.rho_down;
    eta_a *= cfg.rho_eta;
    eta_b *= cfg.rho_eta;
  }
}

InversionHistory run_inversion(const ScatterConfig &scfg, const InversionConfig &icfg,
                               const FarField &data, const BoundaryCurve &initial_curve,
                               const ImpedanceField &initial_imp,
                               const std::optional<RunOutput> &out)
{
  scfg.validate();
  if (initial_imp.size() != initial_curve.size())
  {
    throw MeshMismatch("initial impedance size differs from the curve node count");
  }
  if (data.num_incident() == 0)
  {
    throw ConfigError("inversion needs at least one far field");
  }
  if (out)
  {
    std::filesystem::create_directories(out->directory);
  }

  DescentState st;
  st.curve = initial_curve;
  st.imp = initial_imp;
  st.mesh = triangulate(st.curve, scfg.radius, scfg.h, scfg.mesh_seed);
  auto solver = std::make_unique<ScatterSolver>(scfg, st.mesh, st.imp);
  Evaluation eval = evaluate(*solver, data);
  st.cost = eval.cost;

  const double a_eff = std::sqrt(std::abs(st.curve.signed_area()) / pi);
  const double eta_floor = icfg.eta_floor > 0.0 ? icfg.eta_floor : scfg.h * scfg.h;
  st.eta_tau = st.eta_nu =
      icfg.eta_shape > 0.0 ? icfg.eta_shape : std::max(a_eff * a_eff / 64.0, eta_floor);
  st.eta_impedance =
      icfg.eta_impedance > 0.0 ? icfg.eta_impedance : std::max(a_eff * a_eff / 64.0, eta_floor);
  st.alpha_shape = icfg.alpha_shape;
  st.alpha_impedance = icfg.alpha_impedance;
  double alpha_min_shape = 0.0, alpha_min_imp = 0.0;

  const bool use_shape = icfg.schedule != Schedule::ImpedanceOnly;
  const bool use_imp = icfg.schedule != Schedule::ShapeOnly && st.imp.active.any();
  bool shape_done = !use_shape, imp_done = !use_imp;

  InversionHistory hist;
  hist.initial_cost = st.cost;
  if (out)
  {
    write_snapshot(*out, 0, st);
  }

  bool next_is_shape = use_shape;
  for (st.iteration = 1; st.iteration <= icfg.max_iterations; ++st.iteration)
  {
    if (shape_done && imp_done)
    {
      break;
    }
    const bool shape_sweep = shape_done ? false : (imp_done ? true : next_is_shape);
    next_is_shape = !shape_sweep;

    const Gradients g = compute_gradients(*solver, eval);
    if (out && icfg.write_gradients)
    {
      std::ofstream gs(out->directory / numbered("gradient", st.iteration, "csv"));
      write_gradient_csv(gs, g.shape, g.impedance);
    }

    if (shape_sweep && st.alpha_shape <= 0.0)
    {
      const Perturbation unit = shape_step(st.curve, g.shape, 1.0, st.eta_tau, st.eta_nu);
      const double amp = unit.max_amplitude();
      st.alpha_shape = amp > 0.0 ? icfg.shape_step_fraction * a_eff / amp : 1.0;
    }
    if (!shape_sweep && st.alpha_impedance <= 0.0)
    {
      const double amp = impedance_step_amplitude(st.curve, st.imp.active, g.impedance,
                                                  st.eta_impedance, icfg.constant_impedance);
      const double scale = std::max({0.1, st.imp.lambda.cwiseAbs().mean(),
                                     st.imp.mu.cwiseAbs().mean()});
      st.alpha_impedance = amp > 0.0 ? icfg.impedance_step_fraction * scale / amp : 1.0;
    }
    if (shape_sweep && alpha_min_shape == 0.0)
    {
      alpha_min_shape = icfg.alpha_min_factor * st.alpha_shape;
    }
    if (!shape_sweep && alpha_min_imp == 0.0)
    {
      alpha_min_imp = icfg.alpha_min_factor * st.alpha_impedance;
    }

    const bool zero_gradient =
        shape_sweep ? (max_abs(g.shape.normal) == 0.0 && max_abs(g.shape.tangential) == 0.0)
                    : (max_abs(g.impedance.re_lambda) == 0.0 &&
                       max_abs(g.impedance.im_lambda) == 0.0 && max_abs(g.impedance.re_mu) == 0.0 &&
                       max_abs(g.impedance.im_mu) == 0.0);
    if (zero_gradient)
    {
      (shape_sweep ? shape_done : imp_done) = true;
      hist.stop_reason = "zero gradient";
      continue;
    }

    // Backtracking on the current gradient until the cost decreases or alpha is exhausted.
    for (;;)
    {
      double &alpha = shape_sweep ? st.alpha_shape : st.alpha_impedance;
      std::optional<Trial> trial;
      try
      {
        DescentState t = st;
        if (shape_sweep)
        {
          const Perturbation p = shape_step(st.curve, g.shape, alpha, st.eta_tau, st.eta_nu);
          if (!perturbation_admissible(st.curve, p))
          {
            throw SelfIntersection("step exceeds the admissible fraction of the feature size");
          }
          t.curve = apply_perturbation(st.curve, curve_fields(st.curve), p);
          t.imp = transport_impedance(st.imp, st.curve, t.curve);
          regularize(t.curve, t.imp, scfg.h, icfg.max_edge_ratio);
          t.mesh = remesh_after_update(st.mesh, t.curve);
        }
        else
        {
          t.imp = impedance_step(st.curve, st.imp, g.impedance, alpha, st.eta_impedance,
                                 icfg.constant_impedance, icfg.mu_floor);
        }
        ScatterSolver s(scfg, t.mesh, t.imp);
        Evaluation e = evaluate(s, data);
        t.cost = e.cost;
        trial.emplace(Trial{std::move(t), std::move(s), std::move(e)});
      }
      catch (const SelfIntersection &)
      {
      }
      catch (const ClearanceViolation &)
      {
      }
      catch (const QualityFailure &)
      {
      }
      catch (const InvalidCurve &)
      {
      }

      const bool accepted = trial && trial->state.cost.F < st.cost.F;
      HistoryEntry h;
      h.iteration = st.iteration;
      h.sweep = shape_sweep ? 's' : 'i';
      h.cost = trial ? trial->state.cost : CostValue{std::nan(""), std::nan("")};
      h.alpha = alpha;
      h.eta_tau = shape_sweep ? st.eta_tau : st.eta_impedance;
      h.eta_nu = shape_sweep ? st.eta_nu : st.eta_impedance;
      h.accepted = accepted;
      hist.entries.push_back(h);

      if (accepted)
      {
        st = std::move(trial->state);
        if (shape_sweep)
        {
          update_step(st.alpha_shape, st.eta_tau, st.eta_nu, true, icfg);
          st.eta_tau = std::max(st.eta_tau, eta_floor);
          st.eta_nu = std::max(st.eta_nu, eta_floor);
        }
        else
        {
          double unused = 0.0;
          update_step(st.alpha_impedance, st.eta_impedance, unused, true, icfg);
          st.eta_impedance = std::max(st.eta_impedance, eta_floor);
        }
        solver = std::make_unique<ScatterSolver>(std::move(trial->solver));
        eval = std::move(trial->eval);
        ++hist.accepted;
        if (out)
        {
          write_snapshot(*out, st.iteration, st);
        }
        break;
      }
      if (shape_sweep)
      {
        update_step(alpha, st.eta_tau, st.eta_nu, false, icfg);
      }
      else
      {
        double unused = 0.0;
        update_step(alpha, st.eta_impedance, unused, false, icfg);
      }
      if (alpha < (shape_sweep ? alpha_min_shape : alpha_min_imp))
      {
        (shape_sweep ? shape_done : imp_done) = true;
        hist.stop_reason = "alpha below minimum";
        break;
      }
    }
  }
  if (st.iteration > icfg.max_iterations)
  {
    st.iteration = icfg.max_iterations;
    hist.stop_reason = "iteration cap";
  }
  hist.final_state = std::move(st);
  if (out)
  {
    std::ofstream h(out->directory / "history.csv");
    write_history_csv(h, hist);
    std::ofstream c(out->directory / "final_curve.csv");
    write_curve_csv(c, hist.final_state.curve);
    std::ofstream i(out->directory / "final_impedance.csv");
    write_impedance_csv(i, hist.final_state.imp);
  }
  return hist;
}

void write_history_csv(std::ostream &os, const InversionHistory &h)
{
  os << "iter,F,Error,alpha,eta_tau,eta_nu,accepted,sweep\n";
  os << 0 << ',' << csv::format(h.initial_cost.F) << ',' << csv::format(h.initial_cost.error)
     << ",0,0,0,1,-\n";
  for (const auto &e : h.entries)
  {
    os << e.iteration << ',' << csv::format(e.cost.F) << ',' << csv::format(e.cost.error) << ','
       << csv::format(e.alpha) << ',' << csv::format(e.eta_tau) << ',' << csv::format(e.eta_nu)
       << ',' << (e.accepted ? 1 : 0) << ',' << e.sweep << '\n';
  }
}

}  // namespace gibc
