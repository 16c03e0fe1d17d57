#include "ccgame/cli.hpp"

#include "ccgame/asymptotics.hpp"
#include "ccgame/config.hpp"
#include "ccgame/evaluation.hpp"
#include "ccgame/pursuit_evasion.hpp"
#include "ccgame/riccati_exact.hpp"
#include "ccgame/simulator.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <random>
#include <sstream>

namespace ccgame::cli {

namespace fs = std::filesystem;

namespace {

std::string num(double x, int digits = 6) {
  std::ostringstream os;
  os << std::setprecision(digits) << x;
  return os.str();
}

std::string eps_tag(double eps) { return "eps" + num(eps, 10); }

LoadedSpec load(const RunManifest& m) {
  LoadedSpec loaded;
  if (m.spec_path.empty()) {
    loaded.spec = pursuit_evasion::spec(0.2);
    loaded.eps_list = {0.2, 0.1, 0.05};
  } else {
    loaded = load_spec(m.spec_path);
  }
  if (!m.eps_list.empty()) loaded.eps_list = m.eps_list;
  for (double eps : loaded.eps_list) {
    if (!(eps > 0.0)) throw std::invalid_argument("epsilon must be positive");
  }
  loaded.spec.epsilon = loaded.eps_list.front();
  return loaded;
}

void write_file(const RunManifest& m, const std::string& name,
                const std::function<void(std::ostream&)>& body) {
  if (m.output_dir.empty()) return;
  fs::create_directories(m.output_dir);
  const fs::path path = fs::path(m.output_dir) / name;
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  body(f);
  if (!f) throw std::runtime_error("error writing " + path.string());
}

// Fails with exit code 1 unless the hypotheses hold for every eps.
bool validate_or_report(const LoadedSpec& loaded, std::ostream& out, std::ostream& err,
                        bool verbose) {
  for (double eps : loaded.eps_list) {
    const ValidationReport rep = validate_spec(loaded.spec.with_epsilon(eps));
    if (verbose) {
      for (const InvariantCheck& c : rep.checks) {
        out << "  [" << (c.passed ? "ok" : "FAIL") << "] " << c.name;
        if (!c.passed) out << ": " << c.message;
        out << '\n';
      }
      for (const std::string& w : rep.warnings) out << "  warning: " << w << '\n';
    }
    if (!rep.ok) {
      err << "validation failed (eps = " << eps << "): " << rep.summary() << '\n';
      return false;
    }
    if (verbose) {
      out << rep.summary() << '\n';
      verbose = false;  // one listing is enough
    }
  }
  return true;
}

void write_matrix_csv(std::ostream& os, const Trajectory& traj, const std::string& prefix) {
  const Eigen::Index r = traj.rows(), c = traj.cols();
  os << "t";
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = traj.symmetric() ? i : 0; j < c; ++j)
      os << ',' << prefix << '_' << i + 1 << j + 1;
  os << '\n' << std::setprecision(17);
  for (std::size_t k = 0; k < traj.size(); ++k) {
    os << traj.grid()[k];
    const Eigen::MatrixXd& M = traj.values()[k];
    for (Eigen::Index i = 0; i < r; ++i)
      for (Eigen::Index j = traj.symmetric() ? i : 0; j < c; ++j) os << ',' << M(i, j);
    os << '\n';
  }
}

void print_report(std::ostream& out, const ValueReport& r) {
  auto rel = [](const ApproxError& e) {
    return e.rel_err ? num(100.0 * *e.rel_err, 4) + "%" : std::string("n/a");
  };
  out << "eps = " << r.epsilon << "\n"
      << "  J*        = " << num(r.J_star, 8) << "\n"
      << "  J_eps0    = " << num(r.eps0.value, 8) << "  abs " << num(r.eps0.abs_err, 4) << "  rel "
      << rel(r.eps0) << "\n"
      << "  J_u,eps0  = " << num(r.u.value, 8) << "  abs " << num(r.u.abs_err, 4) << "  rel "
      << rel(r.u) << "\n"
      << "  J_v,eps0  = " << num(r.v.value, 8) << "  abs " << num(r.v.abs_err, 4) << "  rel "
      << rel(r.v) << "\n"
      << "  psi = " << num(r.psi.psi) << "  psi_u = " << num(r.psi.psi_u)
      << "  psi_v = " << num(r.psi.psi_v) << "\n"
      << "  bracketing J_v <= J* <= J_u: "
      << (r.lower_bracket && r.upper_bracket ? "holds" : "VIOLATED") << "\n";
}

FeedbackLaw perturbed(FeedbackLaw law, bool minimizer, Eigen::MatrixXd R, double delta) {
  auto base = minimizer ? law.minimizer_gain : law.maximizer_gain;
  auto gain = [base, R = std::move(R), delta](double t) -> Eigen::MatrixXd {
    return base(t) + delta * R;
  };
  (minimizer ? law.minimizer_gain : law.maximizer_gain) = gain;
  law.label += minimizer ? "+du" : "+dv";
  return law;
}

// ---- commands ------------------------------------------------------------

int cmd_validate(const RunManifest& m, std::ostream& out, std::ostream& err) {
  const LoadedSpec loaded = load(m);
  return validate_or_report(loaded, out, err, true) ? kOk : kValidation;
}

int cmd_solve_exact(const RunManifest& m, std::ostream& out, std::ostream& err) {
  const LoadedSpec loaded = load(m);
  if (!validate_or_report(loaded, out, err, false)) return kValidation;
  const Config cfg = integrator_config(m);
  for (double eps : loaded.eps_list) {
    const GameSpec s = loaded.spec.with_epsilon(eps);
    const ExactSolution sol = solve_exact(s, cfg);
    out << "eps = " << eps << "  J* = " << num(sol.value, 10) << "  (" << sol.K.size()
        << " grid points)\n";
    const Eigen::IOFormat fmt(8, 0, ", ", "\n", "    [", "]");
    out << "  K(0) =\n" << sol.K.eval(0.0).format(fmt) << '\n';
    write_file(m, "exact_K_" + eps_tag(eps) + ".csv",
               [&](std::ostream& os) { write_matrix_csv(os, sol.K, "K"); });
  }
  return kOk;
}

int cmd_solve_asymptotic(const RunManifest& m, std::ostream& out, std::ostream& err) {
  const LoadedSpec loaded = load(m);
  if (!validate_or_report(loaded, out, err, false)) return kValidation;
  const Config cfg = integrator_config(m);
  const AsymptoticSolution asym = solve_asymptotic(loaded.spec, cfg);
  const ReducedGame reduced = solve_reduced_game(*asym.partition, cfg);
  const Eigen::IOFormat fmt(8, 0, ", ", "\n", "    [", "]");
  out << "K1o(0) =\n" << asym.K1o.eval(0.0).format(fmt) << '\n'
      << "K6o(0) =\n" << asym.K6o.eval(0.0).format(fmt) << '\n'
      << "beta = " << num(asym.beta, 10) << "  beta_bar = " << num(asym.beta_bar, 10) << '\n'
      << "reduced game value x0' K1o(0) x0 = " << num(reduced.value, 10) << '\n';
  const Eigen::VectorXd z0 = loaded.spec.z0();
  for (double eps : loaded.eps_list) {
    out << "eps = " << eps << "  z0' K0(0) z0 = " << num(z0.dot(assemble_K0(asym, eps, 0.0) * z0), 10)
        << '\n';
  }
  write_file(m, "outer_K1.csv", [&](std::ostream& os) { write_matrix_csv(os, asym.K1o, "K1o"); });
  write_file(m, "outer_K6.csv", [&](std::ostream& os) { write_matrix_csv(os, asym.K6o, "K6o"); });
  return kOk;
}

int cmd_evaluate(const RunManifest& m, std::ostream& out, std::ostream& err) {
  const LoadedSpec loaded = load(m);
  if (!validate_or_report(loaded, out, err, false)) return kValidation;
  const Config cfg = integrator_config(m);
  const AsymptoticSolution asym = solve_asymptotic(loaded.spec, cfg);
  std::vector<ValueReport> reports;
  for (double eps : loaded.eps_list) {
    const GameSpec s = loaded.spec.with_epsilon(eps);
    reports.push_back(value_report(s, solve_exact(s, cfg), solve_L(s, asym, cfg),
                                   solve_M(s, asym, cfg), solve_N(s, asym, cfg)));
    print_report(out, reports.back());
  }
  return kOk;
}

void write_tables(const RunManifest& m, const std::vector<ValueReport>& reports) {
  write_file(m, "error_J_eps0.csv",
             [&](std::ostream& os) { write_error_table_csv(os, reports, Approximation::kEps0); });
  write_file(m, "error_J_u.csv",
             [&](std::ostream& os) { write_error_table_csv(os, reports, Approximation::kU); });
  write_file(m, "error_J_v.csv",
             [&](std::ostream& os) { write_error_table_csv(os, reports, Approximation::kV); });
}

void print_sweep(std::ostream& out, const SweepReport& rep) {
  for (std::size_t i = 0; i < rep.reports.size(); ++i) {
    print_report(out, rep.reports[i]);
    const ValueReport& r = rep.reports[i];
    out << "  C_fit = " << num(r.eps0.C_fit.value_or(NAN), 4)
        << "  C_u = " << num(r.u.C_fit.value_or(NAN), 4)
        << "  C_v = " << num(r.v.C_fit.value_or(NAN), 4) << "  E(eps) = " << num(rep.block_error[i], 6)
        << '\n';
  }
  out << "fitted constants (sweep max): C = " << num(rep.C_max, 4) << "  C_u = " << num(rep.C_u_max, 4)
      << "  C_v = " << num(rep.C_v_max, 4) << '\n';
  for (const std::string& w : rep.warnings) out << "warning: " << w << '\n';
}

int cmd_sweep(const RunManifest& m, std::ostream& out, std::ostream& err) {
  const LoadedSpec loaded = load(m);
  if (!validate_or_report(loaded, out, err, false)) return kValidation;
  const SweepReport rep = convergence_sweep(loaded.spec, loaded.eps_list, integrator_config(m));
  print_sweep(out, rep);
  write_tables(m, rep.reports);
  for (const SweepFailure& f : rep.failures) {
    err << "eps = " << f.epsilon << ": " << f.message << '\n';
  }
  return rep.failures.empty() ? kOk : kSolver;
}

int cmd_simulate(const RunManifest& m, std::ostream& out, std::ostream& err) {
  const LoadedSpec loaded = load(m);
  if (!validate_or_report(loaded, out, err, false)) return kValidation;
  if (m.law != "exact" && m.law != "asymptotic" && m.law != "both") {
    err << "unknown law '" << m.law << "' (expected exact, asymptotic or both)\n";
    return kValidation;
  }
  const Config cfg = integrator_config(m);
  std::optional<AsymptoticSolution> asym;
  if (m.law != "exact") asym = solve_asymptotic(loaded.spec, cfg);
  for (double eps : loaded.eps_list) {
    const GameSpec s = loaded.spec.with_epsilon(eps);
    std::vector<FeedbackLaw> laws;
    if (m.law != "asymptotic") laws.push_back(exact_feedback(solve_exact(s, cfg), s));
    if (asym) laws.push_back(approximate_feedback(*asym, eps));
    for (const FeedbackLaw& law : laws) {
      const TrajectoryRecord rec = simulate(s, law, cfg);
      out << "eps = " << eps << "  law = " << law.label << "  J = " << num(rec.total_cost, 10)
          << '\n';
      for (const ChannelHistory& ch : control_histories(rec)) {
        out << "    " << ch.name << ": peak " << num(ch.peak, 6) << " at t = "
            << num(ch.peak_time, 6) << '\n';
      }
      write_file(m, "trajectory_" + law.label + "_" + eps_tag(eps) + ".csv",
                 [&](std::ostream& os) { write_trajectory_csv(os, rec); });
    }
  }
  return kOk;
}

// ---- example -------------------------------------------------------------

struct Series {
  std::string label;
  std::vector<double> t, y;
};

void write_svg(std::ostream& os, const std::string& title, const std::string& ylabel,
               const std::vector<Series>& series) {
  const double W = 720, H = 440, L = 70, R = 150, T = 40, B = 50;
  double t0 = INFINITY, t1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const Series& s : series) {
    for (double t : s.t) t0 = std::min(t0, t), t1 = std::max(t1, t);
    for (double y : s.y) y0 = std::min(y0, y), y1 = std::max(y1, y);
  }
  if (!(y1 > y0)) y1 = y0 + 1.0;
  if (!(t1 > t0)) t1 = t0 + 1.0;
  auto X = [&](double t) { return L + (W - L - R) * (t - t0) / (t1 - t0); };
  auto Y = [&](double y) { return H - B - (H - T - B) * (y - y0) / (y1 - y0); };
  const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
  os << std::fixed << std::setprecision(2);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << title
     << "</text>\n"
     << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\""
     << H - T - B << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double tv = t0 + (t1 - t0) * k / 4, yv = y0 + (y1 - y0) * k / 4;
    os << "<text x=\"" << X(tv) << "\" y=\"" << H - B + 18 << "\" text-anchor=\"middle\">"
       << num(tv, 4) << "</text>\n"
       << "<text x=\"" << L - 6 << "\" y=\"" << Y(yv) + 4 << "\" text-anchor=\"end\">"
       << num(yv, 4) << "</text>\n";
  }
  if (y0 < 0 && y1 > 0) {
    os << "<line x1=\"" << L << "\" y1=\"" << Y(0) << "\" x2=\"" << W - R << "\" y2=\"" << Y(0)
       << "\" stroke=\"#999\" stroke-dasharray=\"4 3\"/>\n";
  }
  os << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">t</text>\n"
     << "<text x=\"16\" y=\"" << (T + H - B) / 2 << "\" transform=\"rotate(-90 16 "
     << (T + H - B) / 2 << ")\" text-anchor=\"middle\">" << ylabel << "</text>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    const Series& s = series[k];
    const char* c = colors[k % 5];
    os << "<polyline fill=\"none\" stroke=\"" << c << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.t.size(); ++i) os << X(s.t[i]) << ',' << Y(s.y[i]) << ' ';
    os << "\"/>\n";
    const double ly = T + 20 + 20 * static_cast<double>(k);
    os << "<line x1=\"" << W - R + 12 << "\" y1=\"" << ly << "\" x2=\"" << W - R + 36 << "\" y2=\""
       << ly << "\" stroke=\"" << c << "\" stroke-width=\"2\"/>\n"
       << "<text x=\"" << W - R + 42 << "\" y=\"" << ly + 4 << "\">" << s.label << "</text>\n";
  }
  os << "</svg>\n";
}

struct GoldenCheck {
  std::string name;
  bool passed;
  std::string detail;
};

}  // namespace

Config integrator_config(const RunManifest& m) {
  Config cfg;
  if (m.rtol) cfg.rtol = *m.rtol;
  if (m.atol) cfg.atol = *m.atol;
  if (m.method) cfg.method = *m.method;
  cfg.validate();
  return cfg;
}

int run_example(const RunManifest& manifest, std::ostream& out, std::ostream& err) {
  namespace pe = pursuit_evasion;
  const Config cfg = integrator_config(manifest);
  const std::vector<double> eps_list{0.2, 0.1, 0.05};
  const GameSpec spec = pe::spec(eps_list.front());
  std::vector<GoldenCheck> checks;
  auto check = [&](std::string name, bool ok, std::string detail) {
    checks.push_back({std::move(name), ok, std::move(detail)});
  };

  const ValidationReport vr = validate_spec(spec);
  out << "validate: " << vr.summary() << '\n';
  check("validation", vr.ok && vr.a2_satisfied, vr.summary());

  const SweepReport sweep = convergence_sweep(spec, eps_list, cfg);
  for (const SweepFailure& f : sweep.failures) {
    err << "eps = " << f.epsilon << ": " << f.message << '\n';
  }
  if (!sweep.failures.empty()) return kSolver;
  write_tables(manifest, sweep.reports);

  // (a) error tables against the reference rows.
  const struct {
    const char* name;
    const pe::Table* table;
    Approximation which;
    bool check_delta;
  } tables[] = {{"J_eps0", &pe::table_eps0(), Approximation::kEps0, false},
                {"J_u", &pe::table_u(), Approximation::kU, true},
                {"J_v", &pe::table_v(), Approximation::kV, true}};
  out << "\n" << std::left;
  for (const auto& tb : tables) {
    out << tb.name << "\n  " << std::setw(7) << "eps" << std::setw(12) << "J*" << std::setw(12)
        << "J_approx" << std::setw(12) << "abs_err" << std::setw(10) << "rel_%"
        << "(reference: J*, J_approx, abs_err, rel_%)\n";
    for (std::size_t i = 0; i < 3; ++i) {
      const pe::TableRow& row = (*tb.table)[i];
      const ValueReport& r = sweep.reports[i];
      const ApproxError& e = select(r, tb.which);
      const double rel = 100.0 * e.rel_err.value_or(NAN);
      out << "  " << std::setw(7) << num(r.epsilon) << std::setw(12) << num(r.J_star, 6)
          << std::setw(12) << num(e.value, 6) << std::setw(12) << num(e.abs_err, 4) << std::setw(10)
          << num(rel, 3) << "(" << row.J_star << ", " << row.J_approx << ", " << row.abs_err << ", "
          << row.rel_err_percent << ")\n";
      const std::string at = std::string(tb.name) + " eps=" + num(row.epsilon);
      check(at + " J_star", std::abs(r.J_star - row.J_star) <= 1e-3,
            num(r.J_star, 6) + " vs " + num(row.J_star));
      check(at + " J_approx", std::abs(e.value - row.J_approx) <= 1e-3,
            num(e.value, 6) + " vs " + num(row.J_approx));
      check(at + " rel_err", std::abs(rel - row.rel_err_percent) <= 0.15,
            num(rel, 3) + "% vs " + num(row.rel_err_percent) + "%");
      if (tb.check_delta) {
        check(at + " abs_err", std::abs(e.abs_err - row.abs_err) <= 0.2 * row.abs_err,
              num(e.abs_err, 4) + " vs " + num(row.abs_err));
      }
    }
  }
  for (const ValueReport& r : sweep.reports) {
    check("bracketing eps=" + num(r.epsilon), r.lower_bracket && r.upper_bracket,
          num(r.v.value, 8) + " <= " + num(r.J_star, 8) + " <= " + num(r.u.value, 8));
  }

  // (b) trajectories under both laws, and the figure data.
  const AsymptoticSolution asym = solve_asymptotic(spec, cfg);
  std::vector<Series> fig_u, fig_v;
  std::vector<double> peak_u, peak_v;
  for (double eps : eps_list) {
    const GameSpec s = spec.with_epsilon(eps);
    const ExactSolution exact = solve_exact(s, cfg);
    for (const FeedbackLaw& law : {exact_feedback(exact, s), approximate_feedback(asym, eps)}) {
      const TrajectoryRecord rec = simulate(s, law, cfg);
      write_file(manifest, "trajectory_" + law.label + "_" + eps_tag(eps) + ".csv",
                 [&](std::ostream& os) { write_trajectory_csv(os, rec); });
      if (law.label != "asymptotic") continue;
      const auto hist = control_histories(rec);
      Series su{"eps = " + num(eps), rec.grid, hist[0].values};
      Series sv{"eps = " + num(eps), rec.grid, hist[s.m + 1].values};
      peak_u.push_back(hist[0].peak);
      peak_v.push_back(hist[s.m + 1].peak);
      fig_u.push_back(std::move(su));
      fig_v.push_back(std::move(sv));
    }
  }
  write_file(manifest, "fig_u01.svg", [&](std::ostream& os) {
    write_svg(os, "minimizer control u_01(t) under the approximate law", "u_01", fig_u);
  });
  write_file(manifest, "fig_v02.svg", [&](std::ostream& os) {
    write_svg(os, "maximizer control v_02(t) under the approximate law", "v_02", fig_v);
  });
  out << "\npeak |u_01|: " << num(peak_u[0]) << ", " << num(peak_u[1]) << ", " << num(peak_u[2])
      << "\nmax |v_02|:  " << num(peak_v[0]) << ", " << num(peak_v[1]) << ", " << num(peak_v[2])
      << '\n';
  check("peak |u_01| grows as eps decreases", peak_u[0] < peak_u[1] && peak_u[1] < peak_u[2], "");
  check("max |v_02| shrinks as eps decreases", peak_v[0] > peak_v[1] && peak_v[1] > peak_v[2], "");

  // (c) closed-form outer terms.
  double err1 = 0.0, err6 = 0.0;
  write_file(manifest, "closed_form.csv", [&](std::ostream& os) {
    os << "t,K1o_numeric,K1o_closed,K6o_numeric,K6o_closed\n" << std::setprecision(17);
    for (int i = 0; i <= 400; ++i) {
      const double t = spec.t_f * i / 400.0;
      os << t << ',' << asym.K1o.eval(t)(0, 0) << ',' << pe::K1o(t) << ','
         << asym.K6o.eval(t)(0, 0) << ',' << pe::K6o(t) << '\n';
    }
  });
  for (int i = 0; i <= 400; ++i) {
    const double t = spec.t_f * i / 400.0;
    err1 = std::max(err1, std::abs(asym.K1o.eval(t)(0, 0) - pe::K1o(t)));
    err6 = std::max(err6, std::abs(asym.K6o.eval(t)(0, 0) - pe::K6o(t)));
  }
  const double k6_tf = asym.K6o.eval(spec.t_f)(0, 0);
  std::ostringstream cf;
  cf << "closed-form comparison on 401 points of [0, 1.5]\n"
     << "  K1o: max |numeric - 8 tan(atan(1/16) + 1.2 - 0.8 t)| = " << num(err1, 3) << '\n'
     << "  K6o: max |numeric - g tanh(g (t - 1.5)) / (g tanh(g (t - 1.5)) - 2)| = " << num(err6, 3)
     << '\n'
     << "  K1o(0) = " << num(asym.K1o.eval(0.0)(0, 0), 12) << "  closed form "
     << num(pe::K1o(0.0), 12) << '\n'
     << "  K6o(1.5) = " << k6_tf << '\n';
  out << '\n' << cf.str();
  write_file(manifest, "closed_form_report.txt", [&](std::ostream& os) { os << cf.str(); });
  check("K1o closed form", err1 <= 1e-7, num(err1, 3));
  check("K6o closed form", err6 <= 1e-7, num(err6, 3));
  check("K6o(1.5) = 0", k6_tf == 0.0, num(k6_tf));

  // Seeded saddle-point spot check at eps = 0.1.
  {
    const double eps = 0.1, delta = 0.1, tol = 5e-3;
    const GameSpec s = spec.with_epsilon(eps);
    const ExactSolution exact = solve_exact(s, cfg);
    const FeedbackLaw star = exact_feedback(exact, s);
    std::mt19937_64 rng(manifest.seed);
    std::normal_distribution<double> gauss;
    bool ok = true;
    double worst = -INFINITY;
    for (int k = 0; k < 5; ++k) {
      const Eigen::MatrixXd Ru = Eigen::MatrixXd::NullaryExpr(s.m, s.dim(), [&] { return gauss(rng); });
      const Eigen::MatrixXd Rv = Eigen::MatrixXd::NullaryExpr(s.l, s.dim(), [&] { return gauss(rng); });
      const double Ju = simulate(s, perturbed(star, true, Ru, delta), cfg).total_cost;
      const double Jv = simulate(s, perturbed(star, false, Rv, delta), cfg).total_cost;
      worst = std::max({worst, exact.value - Ju, Jv - exact.value});
      ok = ok && Jv <= exact.value + tol && exact.value <= Ju + tol;
    }
    check("saddle inequality (seed " + std::to_string(manifest.seed) + ")", ok,
          "worst violation " + num(worst, 3));
  }

  std::ostringstream summary;
  const GoldenCheck* first = nullptr;
  int failed = 0;
  for (const GoldenCheck& c : checks) {
    summary << (c.passed ? "PASS " : "FAIL ") << c.name;
    if (!c.detail.empty()) summary << "  [" << c.detail << "]";
    summary << '\n';
    if (!c.passed) {
      ++failed;
      if (!first) first = &c;
    }
  }
  out << "\ngolden checks\n" << summary.str();
  write_file(manifest, "golden_checks.txt", [&](std::ostream& os) { os << summary.str(); });
  if (first) {
    err << failed << " golden check(s) failed; first: " << first->name << " [" << first->detail
        << "]\n";
    return kGolden;
  }
  out << "all " << checks.size() << " golden checks pass\n";
  return kOk;
}

int run(const RunManifest& m, std::ostream& out, std::ostream& err) {
  try {
    if (m.command == "validate") return cmd_validate(m, out, err);
    if (m.command == "solve-exact") return cmd_solve_exact(m, out, err);
    if (m.command == "solve-asymptotic") return cmd_solve_asymptotic(m, out, err);
    if (m.command == "evaluate") return cmd_evaluate(m, out, err);
    if (m.command == "sweep") return cmd_sweep(m, out, err);
    if (m.command == "simulate") return cmd_simulate(m, out, err);
    if (m.command == "example") return run_example(m, out, err);
    err << "unknown command '" << m.command << "'\n";
    return kValidation;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kValidation;
  } catch (const DimensionError& e) {
    err << "dimension error: " << e.what() << '\n';
    return kValidation;
  } catch (const SolverError& e) {
    err << "solver failure (" << e.assumption() << "): " << e.what() << '\n';
    return kSolver;
  } catch (const AssumptionError& e) {
    err << "solver failure (A2): " << e.what() << '\n';
    return kSolver;
  } catch (const IntegrationError& e) {
    err << "solver failure: " << e.what() << '\n';
    return kSolver;
  } catch (const std::invalid_argument& e) {
    err << "invalid input: " << e.what() << '\n';
    return kValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kSolver;
  }
}

std::optional<int> parse_args(int argc, char** argv, RunManifest& m, std::ostream& out,
                              std::ostream& err) {
  CLI::App app{"Cheap-control zero-sum LQ game: exact and asymptotic solutions"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string method;
  double rtol = 0.0, atol = 0.0;
  app.add_option("--spec", m.spec_path, "game file (.toml subset or .json); default: built-in example");
  app.add_option("--eps", m.eps_list, "epsilon values, e.g. 0.2,0.1,0.05")->delimiter(',');
  app.add_option("--out", m.output_dir, "output directory for CSV and SVG files");
  auto* o_rtol = app.add_option("--rtol", rtol, "relative tolerance")->check(CLI::PositiveNumber);
  auto* o_atol = app.add_option("--atol", atol, "absolute tolerance")->check(CLI::PositiveNumber);
  app.add_option("--seed", m.seed, "seed for randomized checks");
  app.add_option("--method", method, "integrator")->check(CLI::IsMember({"rk4", "rk45"}));

  const std::pair<const char*, const char*> commands[] = {
      {"validate", "check the standing hypotheses"},
      {"solve-exact", "solve the game Riccati equation"},
      {"solve-asymptotic", "build the zero-order asymptotic solution"},
      {"evaluate", "values, guaranteed results and error bounds"},
      {"sweep", "convergence sweep over epsilon"},
      {"simulate", "closed-loop simulation"},
      {"example", "reproduce the pursuit-evasion example and check it"}};
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->callback([&m, name = std::string(name)] { m.command = name; });
    if (std::string(name) == "simulate") {
      sub->add_option("--law", m.law, "exact | asymptotic | both")
          ->check(CLI::IsMember({"exact", "asymptotic", "both"}));
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kValidation;
  }
  if (o_rtol->count()) m.rtol = rtol;
  if (o_atol->count()) m.atol = atol;
  if (method == "rk4") m.method = Method::kRk4;
  if (method == "rk45") m.method = Method::kRk45;
  return std::nullopt;
}

}  // namespace ccgame::cli
