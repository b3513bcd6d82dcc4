#include "annealab_cli/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>
#include <optional>
#include <sstream>
#include <type_traits>
#include <variant>

#include <fmt/format.h>

#include "annealab/adiabatic.hpp"
#include "annealab/convergence.hpp"
#include "annealab/parallel.hpp"
#include "annealab/qmap.hpp"
#include "annealab_cli/output.hpp"

namespace annealab::cli {
namespace {

constexpr double kSpectrumTolerance = 1e-9;
constexpr double kZeroModeTolerance = 1e-9;
constexpr double kClosedFormTolerance = 1e-12;

nlohmann::json envelope(const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["experiment"] = std::string(to_string(cfg.kind));
  j["seed"] = cfg.seed;
  j["config"] = cfg.source.filename().string();
  if (cfg.model) j["model"] = cfg.model_origin;
  std::vector<std::string> rates;
  for (auto r : cfg.rates) rates.emplace_back(to_string(r));
  j["rates"] = rates;
  return j;
}

nlohmann::json describe(const Schedule& s) {
  nlohmann::json j{{"kind", std::string(to_string(s.kind()))}, {"tau", s.tau()},
                   {"beta_max", s.beta_max()}};
  std::visit(
      [&](const auto& p) {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, LinearRamp>) {
          j["beta_start"] = p.beta_start;
          j["beta_end"] = p.beta_end;
        } else if constexpr (std::is_same_v<P, ConstantBeta>) {
          j["beta"] = p.beta;
        } else if constexpr (std::is_same_v<P, GemanParams>) {
          j.update({{"p", p.p}, {"n", p.n}, {"epsilon", p.epsilon}, {"b", p.b},
                    {"c_prime", p.c_prime}, {"c", p.c}, {"a", p.a}});
        } else if constexpr (std::is_same_v<P, ExponentialQuench>) {
          j.update({{"beta_start", p.beta_start}, {"beta_target", p.beta_target},
                    {"time_constant", p.time_constant}});
        } else {
          j["s"] = p.s;
          j["beta"] = p.beta;
        }
      },
      s.parameters());
  return j;
}

std::string model_text(const IsingModel& m) {
  return fmt::format("N={} topology={}", m.n_spins(), to_string(m.topology()));
}

// --- verify-mapping -------------------------------------------------------

int run_verify_mapping(const ExperimentConfig& cfg, OutputDirectory& out, std::ostream& log) {
  std::vector<IsingModel> models;
  std::vector<std::string> labels;
  if (cfg.model) {
    models.push_back(*cfg.model);
    labels.push_back(cfg.model_origin);
  }
  std::mt19937_64 rng(cfg.seed);
  std::vector<double> random_betas;
  for (int k = 0; k < cfg.random.count; ++k) {
    const int n = std::uniform_int_distribution<int>(cfg.random.n_min, cfg.random.n_max)(rng);
    models.push_back(random_model(n, rng));
    labels.push_back(fmt::format("random[{}]", k));
    random_betas.push_back(
        std::uniform_real_distribution<double>(cfg.random.beta_min, cfg.random.beta_max)(rng));
  }

  struct Job {
    std::size_t model;
    double beta;
    RateFamily family;
  };
  std::vector<Job> jobs;
  const std::size_t fixed = cfg.model ? 1 : 0;
  for (std::size_t m = 0; m < models.size(); ++m)
    for (auto family : cfg.rates) {
      if (m < fixed) {
        for (double b : cfg.betas) jobs.push_back({m, b, family});
      } else {
        jobs.push_back({m, random_betas[m - fixed], family});
      }
    }

  struct Row {
    MappingCheck check;
    double gap = 0.0;
    double closed_form_error = -1.0;
    bool pass = true;
  };
  std::vector<Row> rows(jobs.size());
  parallel_for(jobs.size(), cfg.threads, [&](std::size_t k) {
    const auto& job = jobs[k];
    const auto& model = models[job.model];
    Row r;
    r.check = check_mapping(model, job.beta, job.family);
    const auto hsa = map_to_hsa(build_generator(model, job.beta, job.family), job.beta,
                                model.h0_diagonal());
    r.gap = eigendecompose(hsa.matrix).gap();
    if (job.family == RateFamily::Glauber && model.is_uniform_ferro_ring()) {
      const double k_coupling = job.beta * model.uniform_coupling();
      r.closed_form_error =
          (hsa.matrix - closed_form_1d(model.n_spins(), k_coupling).matrix).cwiseAbs().maxCoeff();
    }
    r.pass = r.check.spectrum_error <= kSpectrumTolerance &&
             r.check.zero_mode_residual <= kZeroModeTolerance &&
             (r.closed_form_error < 0.0 || r.closed_form_error <= kClosedFormTolerance);
    rows[k] = r;
  });

  auto report = envelope(cfg);
  nlohmann::json checks = nlohmann::json::array();
  DatTable table;
  table.comments = {"mapping checks: H_SA = -D W D^-1 against the spectrum of W",
                    "family: 0 = glauber, 1 = metropolis; closed_form_error -1 when not applicable"};
  table.columns = {"row [index]", "beta [1/energy]", "family [code]", "N [spins]",
                   "spectrum_error [energy]", "zero_mode_residual [rel]", "gap [energy]",
                   "closed_form_error [energy]"};
  bool all = true;
  double worst_spectrum = 0.0, worst_zero = 0.0;
  for (std::size_t k = 0; k < jobs.size(); ++k) {
    const auto& j = jobs[k];
    const auto& r = rows[k];
    all = all && r.pass;
    worst_spectrum = std::max(worst_spectrum, r.check.spectrum_error);
    worst_zero = std::max(worst_zero, r.check.zero_mode_residual);
    checks.push_back({{"instance", labels[j.model]},
                      {"n_spins", models[j.model].n_spins()},
                      {"beta", j.beta},
                      {"family", std::string(to_string(j.family))},
                      {"spectrum_error", r.check.spectrum_error},
                      {"zero_mode_residual", r.check.zero_mode_residual},
                      {"symmetry_error", r.check.symmetry_error},
                      {"ground_energy", r.check.ground_energy},
                      {"ground_alignment", r.check.ground_alignment},
                      {"w_max_imaginary", r.check.max_imaginary},
                      {"gap", r.gap},
                      {"closed_form_error", r.closed_form_error},
                      {"pass", r.pass}});
    table.rows.push_back({double(k), j.beta, j.family == RateFamily::Glauber ? 0.0 : 1.0,
                          double(models[j.model].n_spins()), r.check.spectrum_error,
                          r.check.zero_mode_residual, r.gap, r.closed_form_error});
  }
  report["checks"] = checks;
  report["tolerances"] = {{"spectrum", kSpectrumTolerance},
                          {"zero_mode", kZeroModeTolerance},
                          {"closed_form", kClosedFormTolerance}};
  report["pass"] = all;
  out.write_json("verify_mapping.json", report);
  out.write_plot("mapping", table,
                 "set logscale y\nset xlabel 'check'\nset ylabel 'error'\n"
                 "plot 'mapping.dat' using 1:($5+1e-18) with points title 'spectrum', \\\n"
                 "     '' using 1:($6+1e-18) with points title 'zero mode'\n");
  log << fmt::format("verify-mapping: {} checks, worst spectrum error {:.3g}, worst zero-mode "
                     "residual {:.3g}: {}\n",
                     jobs.size(), worst_spectrum, worst_zero, all ? "PASS" : "FAIL");
  return all ? 0 : kVerificationFailed;
}

// --- adiabatic-residual ---------------------------------------------------

int run_adiabatic(const ExperimentConfig& cfg, OutputDirectory& out, std::ostream& log) {
  const auto& model = *cfg.model;
  const auto& schedule = *cfg.schedule;
  AdiabaticOptions opts;
  opts.family = cfg.rates.front();
  opts.steps_per_tau = cfg.grid.steps_per_tau;
  opts.sample_points = cfg.grid.s_points;
  opts.levels = cfg.grid.levels;
  opts.include_sa_flow = cfg.sa_flow;
  opts.threads = cfg.threads;
  const auto report = run_adiabatic_residual(model, schedule, cfg.taus, opts);

  auto j = envelope(cfg);
  j["schedule"] = describe(schedule);
  j["result"] = to_json(report);
  out.write_json("adiabatic_residual.json", j);
  std::ostringstream csv;
  write_residual_csv(csv, report);
  out.write("residual.csv", csv.str());

  DatTable residual;
  residual.comments = {"first-order ground probability law: P_pred = 1 - int B_SA / tau",
                       fmt::format("int B_SA = {:.17g}; log-log slope of residual = {:.17g}",
                                   report.integral_b, report.residual_fit.slope)};
  residual.columns = {"tau [time]", "P_num [prob]", "P_pred [prob]", "residual [prob]",
                      "sa_flow_residual [amplitude]"};
  for (const auto& s : report.samples)
    residual.rows.push_back({s.tau, s.p_num, s.p_pred, s.residual, s.sa_flow_residual});
  out.write_plot("residual", residual,
                 "set logscale xy\nset xlabel 'tau'\nset ylabel '|P_num - P_pred|'\n"
                 "plot 'residual.dat' using 1:4 with linespoints title 'master equation'" +
                     std::string(cfg.sa_flow ? ", \\\n     '' using 1:5 with linespoints title 'H_SA flow'\n"
                                             : "\n"));

  DatTable coeff;
  coeff.comments = {fmt::format("instantaneous A_j and B_SA along s for {}", model_text(model))};
  coeff.columns = {"s [1]", "B_SA [energy^-1]"};
  for (Eigen::Index c = 0; c < report.a_samples.cols(); ++c)
    coeff.columns.push_back(fmt::format("A_{} [1]", c + 1));
  for (std::size_t k = 0; k < report.s_grid.size(); ++k) {
    std::vector<double> row{report.s_grid[k], report.b_samples[k]};
    for (Eigen::Index c = 0; c < report.a_samples.cols(); ++c)
      row.push_back(report.a_samples(static_cast<Eigen::Index>(k), c));
    coeff.rows.push_back(row);
  }
  out.write_plot("coefficients", coeff,
                 "set xlabel 's'\nplot 'coefficients.dat' using 1:2 with lines title 'B_SA', \\\n"
                 "     '' using 1:3 with lines title 'A_1'\n");

  const auto scan = scan_spectrum(
      [&](double s) { return mapped_hamiltonian_at(model, schedule, opts.family, s); },
      report.s_grid);
  DatTable spectrum;
  spectrum.comments = {"lowest levels of H_SA(s)"};
  spectrum.columns = {"s [1]"};
  const int levels = std::min<int>(cfg.grid.levels, static_cast<int>(model.dimension()));
  for (int l = 0; l < levels; ++l) spectrum.columns.push_back(fmt::format("E{} [energy]", l));
  spectrum.columns.push_back("gap [energy]");
  for (std::size_t k = 0; k < scan.s.size(); ++k) {
    std::vector<double> row{scan.s[k]};
    for (int l = 0; l < levels; ++l) row.push_back(scan.spectra[k].values[l]);
    row.push_back(scan.spectra[k].gap());
    spectrum.rows.push_back(row);
  }
  out.write_plot("spectrum", spectrum,
                 fmt::format("set xlabel 's'\nset ylabel 'E'\nplot for [i=2:{}] 'spectrum.dat' "
                             "using 1:i with lines title columnhead(i)\n",
                             levels + 1));

  log << fmt::format("adiabatic-residual: int B_SA = {:.10g}, residual slope {:.4f}", report.integral_b,
                     report.residual_fit.slope);
  if (cfg.sa_flow) log << fmt::format(", H_SA-flow slope {:.4f}", report.sa_flow_fit.slope);
  log << "\n";
  for (const auto& w : report.warnings) log << "warning: " << w << "\n";
  return 0;
}

// --- gap-scan --------------------------------------------------------------

int run_gap_scan(const ExperimentConfig& cfg, OutputDirectory& out, std::ostream& log) {
  const auto scan = gap_scan(cfg.gap.betas, cfg.gap.sizes, cfg.gap.coupling, cfg.threads);
  auto j = envelope(cfg);
  j["scan"] = to_json(scan);
  std::optional<GapBoundFit> fit;
  try {
    fit = fit_gap_bound(scan, cfg.gap.fit_min, cfg.gap.fit_max);
  } catch (const std::invalid_argument& e) {
    j["fit_error"] = e.what();
  }
  if (fit) {
    j["fit"] = to_json(*fit);
    nlohmann::json lin = nlohmann::json::object();
    for (int n : scan.sizes) {
      try {
        lin[std::to_string(n)] = log_gap_linearity(scan, n, cfg.gap.fit_min, cfg.gap.fit_max);
      } catch (const std::invalid_argument&) {
      }
    }
    j["log_gap_r_squared"] = lin;
  }
  out.write_json("gap_scan.json", j);
  std::ostringstream csv;
  write_gap_csv(csv, scan);
  out.write("gap.csv", csv.str());
  for (std::size_t i = 0; i < scan.sizes.size(); ++i) {
    const int n = scan.sizes[i];
    DatTable t;
    t.comments = {fmt::format("heat-bath gap of the ferromagnetic chain, N = {}, J = {:.17g}", n,
                              scan.coupling)};
    t.columns = {"beta [1/energy]", "gap [energy]", "calibrated_bound [energy]"};
    for (std::size_t k = 0; k < scan.betas.size(); ++k) {
      const double beta = scan.betas[k];
      t.rows.push_back({beta, scan.at(i, k).gap, fit ? gap_bound(*fit, beta, n) : 0.0});
    }
    const auto name = fmt::format("gap_N{}", n);
    out.write_plot(name, t,
                   fmt::format("set logscale y\nset xlabel 'beta'\nset ylabel 'gap'\n"
                               "plot '{0}.dat' using 1:2 with linespoints title 'measured', \\\n"
                               "     '' using 1:3 with lines title 'bound'\n",
                               name));
  }
  log << fmt::format("gap-scan: {} points", scan.samples.size());
  if (fit) log << fmt::format(", p_fit = {:.6g}, c_fit = {:.6g}, a_fit = {:.6g}", fit->p, fit->c, fit->a);
  log << "\n";
  for (const auto& w : scan.warnings) log << "warning: " << w << "\n";
  return 0;
}

// --- delta-condition -------------------------------------------------------

int run_delta(const ExperimentConfig& cfg, OutputDirectory& out, std::ostream& log) {
  const auto& d = cfg.delta;
  const auto& base = *cfg.schedule;
  const double t_start = d.t_start.value_or(base.kind() == ScheduleKind::Geman ? 1.0 : 0.0);
  DeltaOptions opts;
  opts.threshold = d.threshold;
  opts.tail = d.tail;

  std::vector<DeltaCondition> results(cfg.taus.size());
  parallel_for(cfg.taus.size(), cfg.threads, [&](std::size_t k) {
    const auto run = base.defined_beyond_horizon() ? base : base.with_tau(cfg.taus[k]);
    results[k] = delta_integral(run, d.a, d.c, d.p, d.n, t_start, cfg.taus[k], opts);
  });

  auto j = envelope(cfg);
  j["schedule"] = describe(base);
  nlohmann::json rows = nlohmann::json::array();
  DatTable table;
  table.comments = {"delta = 4 e^{2cN} p^2 N^2 / (a sqrt N) int (d beta/dt)^2 e^{2 beta p N} dt",
                    "verdict: 0 = convergent, 1 = not-small, 2 = divergent"};
  table.columns = {"horizon [time]", "delta [1]", "finite_part [1]", "tail [1]", "verdict [code]"};
  for (const auto& r : results) {
    rows.push_back(to_json(r));
    table.rows.push_back({r.t_end, r.value, r.finite_part, r.tail, double(static_cast<int>(r.verdict))});
  }
  j["results"] = rows;

  if (const auto* g = std::get_if<GemanParams>(&base.parameters())) {
    // ODE residual of the closed form on a log grid, relative.
    double worst = 0.0;
    const double pref = 4.0 * std::exp(2.0 * g->c * g->n) * g->p * g->p * g->n * g->n /
                        (g->a * std::sqrt(double(g->n)));
    for (int k = 0; k < 100; ++k) {
      const double t = std::pow(10.0, -2.0 + 8.0 * k / 99.0);
      const double rate = geman_beta_rate_of_t(*g, t);
      const double lhs = pref * rate * rate * std::exp(2.0 * geman_beta_of_t(*g, t) * g->p * g->n);
      const double rhs = g->b * g->b * std::pow(t, -1.0 - g->epsilon);
      worst = std::max(worst, std::abs(lhs - rhs) / rhs);
    }
    j["ode_relative_residual"] = worst;
    j["closed_form_tail"] = g->b * g->b * std::pow(t_start, -g->epsilon) / g->epsilon;
  }
  out.write_json("delta_condition.json", j);
  out.write_plot("delta", table,
                 "set logscale xy\nset xlabel 'horizon'\nset ylabel 'delta'\n"
                 "plot 'delta.dat' using 1:2 with linespoints title 'delta'\n");

  // integrand over the longest horizon
  const auto& last = results.back();
  const auto run = base.defined_beyond_horizon() ? base : base.with_tau(cfg.taus.back());
  DatTable integrand;
  integrand.comments = {"prefactor * (d beta/dt)^2 e^{2 beta p N} against original time"};
  integrand.columns = {"t [time]", "integrand [1/time]", "beta [1/energy]"};
  const double lo = std::max(t_start, cfg.taus.back() * 1e-6);
  for (int k = 0; k < 200; ++k) {
    const double t = lo * std::pow(cfg.taus.back() / lo, k / 199.0);
    const double rate = run.beta_rate_at_time(t);
    const double beta = run.beta_at_time(t);
    integrand.rows.push_back({t, last.prefactor * rate * rate * std::exp(2.0 * beta * d.p * d.n), beta});
  }
  out.write_plot("delta_integrand", integrand,
                 "set logscale xy\nset xlabel 't'\nplot 'delta_integrand.dat' using 1:2 with lines "
                 "title 'integrand'\n");
  for (const auto& r : results)
    log << fmt::format("delta-condition: horizon {:.6g}: delta = {:.10g} ({})\n", r.t_end, r.value,
                       to_string(r.verdict));
  return 0;
}

// --- dichotomy --------------------------------------------------------------

int run_dichotomy(const ExperimentConfig& cfg, OutputDirectory& out, std::ostream& log) {
  DichotomyOptions opts;
  opts.family = cfg.rates.front();
  opts.constant_beta = cfg.constant_beta;
  opts.threads = cfg.threads;
  const auto report = dichotomy_experiment(*cfg.model, *cfg.fast, *cfg.slow, cfg.taus, opts);
  auto j = envelope(cfg);
  j["fast"] = describe(*cfg.fast);
  j["slow"] = describe(*cfg.slow);
  j["result"] = to_json(report);
  out.write_json("dichotomy.json", j);
  const auto column = [&](const std::string& name, const std::string& what, auto pick) {
    DatTable t;
    t.comments = {what, fmt::format("capped equilibrium ground weight {:.17g}", report.capped_equilibrium)};
    t.columns = {"horizon [time]", "P_ground [prob]"};
    for (const auto& row : report.rows) t.rows.push_back({row.horizon, pick(row)});
    out.write_plot(name, t,
                   fmt::format("set logscale x\nset xlabel 'horizon'\nset ylabel 'P_ground'\n"
                               "plot '{}.dat' using 1:2 with linespoints title '{}', {:.17g} title "
                               "'equilibrium'\n",
                               name, name, report.capped_equilibrium));
  };
  column("dichotomy_log", "logarithmic schedule", [](const DichotomyRow& r) { return r.p_log; });
  column("dichotomy_fast", "fast quench", [](const DichotomyRow& r) { return r.p_fast; });
  column("dichotomy_constant", "constant-beta control",
         [](const DichotomyRow& r) { return r.p_constant; });
  log << fmt::format("dichotomy: equilibrium {:.6f}; log schedule {} ({:.6f} at longest horizon); "
                     "fast quench {:.6f}\n",
                     report.capped_equilibrium, report.log_monotone ? "monotone" : "NOT monotone",
                     report.rows.back().p_log, report.rows.back().p_fast);
  return 0;
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& config, std::ostream& log) {
  OutputDirectory out(config.output);
  RunResult result;
  switch (config.kind) {
    case ExperimentKind::VerifyMapping: result.status = run_verify_mapping(config, out, log); break;
    case ExperimentKind::AdiabaticResidual: result.status = run_adiabatic(config, out, log); break;
    case ExperimentKind::GapScan: result.status = run_gap_scan(config, out, log); break;
    case ExperimentKind::DeltaCondition: result.status = run_delta(config, out, log); break;
    case ExperimentKind::Dichotomy: result.status = run_dichotomy(config, out, log); break;
  }
  out.write_manifest(std::string(to_string(config.kind)));
  result.files = out.files();
  result.files.push_back("manifest.json");
  return result;
}

}  // namespace annealab::cli
