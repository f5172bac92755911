#include "algmech/cli.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "algmech/algebroid.hpp"
#include "algmech/dynamics.hpp"
#include "algmech/errors.hpp"
#include "algmech/prolongation.hpp"
#include "algmech/tulczyjew.hpp"
#include "algmech/verify.hpp"

namespace algmech {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) parts.push_back(item);
  return parts;
}

/// Comma-separated real numbers; `what` names the flag for error messages.
Eigen::VectorXd parse_number_list(const std::string& text,
                                  const std::string& what) {
  std::vector<double> vals;
  for (const std::string& piece : split(text, ',')) {
    const std::string t = trim(piece);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(t, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad number \"" + t + "\" in " + what);
    }
    if (used != t.size())
      throw std::invalid_argument("bad number \"" + t + "\" in " + what);
    vals.push_back(v);
  }
  return Eigen::Map<Eigen::VectorXd>(vals.data(),
                                     static_cast<Eigen::Index>(vals.size()));
}

Eigen::VectorXd sized_or_zero(const std::string& text, int size,
                              const std::string& what) {
  if (text.empty()) return Eigen::VectorXd::Zero(size);
  Eigen::VectorXd v = parse_number_list(text, what);
  if (v.size() != size)
    throw std::invalid_argument(what + " needs " + std::to_string(size) +
                                " values, got " + std::to_string(v.size()));
  return v;
}

/// Point spec "x=1,0.5;xi=0,0,1"; either group may be omitted (zeros).
void parse_point_spec(const std::string& spec, int n, int m,
                      const std::string& fiber_key, Eigen::VectorXd& x,
                      Eigen::VectorXd& fiber) {
  x = Eigen::VectorXd::Zero(n);
  fiber = Eigen::VectorXd::Zero(m);
  for (const std::string& raw : split(spec, ';')) {
    const std::string seg = trim(raw);
    if (seg.empty()) continue;
    const auto eq = seg.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("point spec segment \"" + seg +
                                  "\" is missing '='");
    const std::string key = trim(seg.substr(0, eq));
    const std::string list = seg.substr(eq + 1);
    if (key == "x") {
      x = sized_or_zero(list, n, "x in point spec");
    } else if (key == fiber_key) {
      fiber = sized_or_zero(list, m, fiber_key + " in point spec");
    } else {
      throw std::invalid_argument("unknown coordinate group \"" + key +
                                  "\" in point spec (expected x or " +
                                  fiber_key + ")");
    }
  }
}

AlgebroidModel resolve_model(const std::string& name_or_path) {
  const std::vector<std::string> names = AlgebroidModel::builtin_names();
  if (std::find(names.begin(), names.end(), name_or_path) != names.end())
    return AlgebroidModel::builtin(name_or_path);
  return AlgebroidModel::from_file(name_or_path);
}

std::string read_text_file(const std::string& path, const std::string& what) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + what + ": " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Inline expression wins over a file-based one; the clash is reported.
std::string pick_expression(const std::string& inline_text,
                            const std::string& file_path,
                            const std::string& flag, std::ostream& err) {
  if (!inline_text.empty() && !file_path.empty()) {
    err << "warning: both " << flag << " and " << flag
        << "-file given; using the inline expression\n";
    return inline_text;
  }
  if (!inline_text.empty()) return inline_text;
  if (!file_path.empty()) return read_text_file(file_path, flag + "-file");
  return "";
}

void print_matrix(std::ostream& out, const Eigen::MatrixXd& A) {
  for (Eigen::Index r = 0; r < A.rows(); ++r) {
    out << "  [";
    for (Eigen::Index c = 0; c < A.cols(); ++c) {
      if (c > 0) out << ", ";
      const double v = A(r, c);
      out << format_double(v == 0.0 ? 0.0 : v);  // avoid displaying -0
    }
    out << "]\n";
  }
}

std::string describe_point(const AlgebroidModel& M, const PhasePoint& p,
                           const std::string& fiber_key) {
  std::string s = "(";
  for (int i = 0; i < M.n(); ++i) {
    if (i > 0) s += ", ";
    s += "x" + std::to_string(i + 1) + "=" + format_double(p.x[i]);
  }
  for (int a = 0; a < M.m(); ++a) {
    if (M.n() > 0 || a > 0) s += ", ";
    s += fiber_key + std::to_string(a + 1) + "=" + format_double(p.fiber[a]);
  }
  return s + ")";
}

// ---------------------------------------------------------------------------

struct VerifyCfg {
  std::string model;
  int samples = 40;
  std::uint64_t seed = 12345;
  double tol = 0.0;
  std::string out_path;
};

int cmd_verify(const VerifyCfg& cfg, std::ostream& out, std::ostream& err) {
  const std::vector<VerificationReport> reports =
      cfg.model.empty()
          ? verify_all(cfg.samples, cfg.seed, cfg.tol)
          : verify_model(resolve_model(cfg.model), cfg.samples, cfg.seed,
                         cfg.tol);
  int healthy = 0;
  for (const VerificationReport& r : reports) {
    if (r.ok()) ++healthy;
    out << (r.ok() ? "ok    " : "FAIL  ") << std::left << std::setw(28)
        << r.check << ' ' << std::setw(8) << r.model << std::right
        << " samples=" << r.samples
        << " max_residual=" << format_double(r.max_residual)
        << " tol=" << format_double(r.tol)
        << (r.expected_fail ? "  (expected fail)" : "") << '\n';
  }
  out << "checks: " << reports.size() << ", healthy: " << healthy << '\n';
  if (!cfg.out_path.empty()) {
    std::ofstream f(cfg.out_path);
    if (!f)
      throw std::invalid_argument("cannot open report file: " + cfg.out_path);
    write_report_lines(reports, f);
    out << "report written to " << cfg.out_path << '\n';
  }
  if (!all_ok(reports)) {
    err << "verification failed\n";
    return 1;
  }
  return 0;
}

struct SimulateCfg {
  std::string model;
  std::string formalism;
  std::string h, h_file;
  std::string l, l_file;
  std::string force, force_file;
  std::string x0, f0;
  double dt = 0.0;
  double t_end = 0.0;
  std::string out_path;
};

int cmd_simulate(const SimulateCfg& cfg, std::ostream& out,
                 std::ostream& err) {
  const AlgebroidModel M = resolve_model(cfg.model);
  const bool lagrangian = cfg.formalism == "lagrangian-tt" ||
                          cfg.formalism == "lagrangian-prolong";
  const Side side = lagrangian ? Side::E : Side::Dual;
  const std::vector<std::string> vars = M.phase_vars(side);
  const std::string fiber_flag = "--f0";

  const Eigen::VectorXd x0 = sized_or_zero(cfg.x0, M.n(), "--x0");
  const Eigen::VectorXd f0 = sized_or_zero(cfg.f0, M.m(), fiber_flag);
  const PhasePoint p0 = M.point(side, x0, f0);

  Trajectory traj;
  if (lagrangian) {
    const std::string text = pick_expression(cfg.l, cfg.l_file, "--l", err);
    if (text.empty())
      throw std::invalid_argument("formalism " + cfg.formalism +
                                  " needs --l or --l-file");
    const ScalarField L = ScalarField::parse(text, vars);
    const ELRoute route = cfg.formalism == "lagrangian-tt" ? ELRoute::Phase
                                                           : ELRoute::Prolong;
    traj = integrate_el(M, L, p0, cfg.dt, cfg.t_end, route);
  } else {
    const std::string text = pick_expression(cfg.h, cfg.h_file, "--h", err);
    if (text.empty())
      throw std::invalid_argument("formalism " + cfg.formalism +
                                  " needs --h or --h-file");
    const ScalarField H = ScalarField::parse(text, vars);
    if (cfg.formalism == "forced") {
      const std::string ftext =
          pick_expression(cfg.force, cfg.force_file, "--force", err);
      if (ftext.empty())
        throw std::invalid_argument("formalism forced needs --force or "
                                    "--force-file");
      std::vector<ScalarField> force;
      for (const std::string& piece : split(ftext, ';')) {
        force.push_back(ScalarField::parse(trim(piece), vars));
      }
      if (static_cast<int>(force.size()) != M.m())
        throw std::invalid_argument(
            "--force needs " + std::to_string(M.m()) +
            " ';'-separated components, got " + std::to_string(force.size()));
      traj = integrate_forced(M, H, force, p0, cfg.dt, cfg.t_end);
    } else {
      traj = integrate_hamiltonian(M, H, p0, cfg.dt, cfg.t_end);
    }
  }

  std::ostream* csv = &out;
  std::ofstream file;
  if (!cfg.out_path.empty()) {
    file.open(cfg.out_path);
    if (!file)
      throw std::invalid_argument("cannot open output file: " + cfg.out_path);
    csv = &file;
  }
  write_csv(traj, *csv);

  double drift = 0.0;
  for (const Eigen::VectorXd& row : traj.monitors) {
    drift = std::max(drift, std::abs(row[0] - traj.monitors.front()[0]));
  }
  std::ostream& summary = cfg.out_path.empty() ? err : out;
  summary << "samples: " << traj.times.size()
          << ", t: [0, " << format_double(traj.times.back()) << "]";
  const Eigen::VectorXd& last = traj.monitors.back();
  for (size_t k = 0; k < traj.monitor_names.size(); ++k) {
    summary << ", final " << traj.monitor_names[k] << ": "
            << format_double(last[static_cast<Eigen::Index>(k)]);
  }
  summary << ", energy drift: " << format_double(drift) << '\n';
  if (!cfg.out_path.empty()) out << "trajectory written to " << cfg.out_path
                                 << '\n';
  return 0;
}

struct InspectCfg {
  std::string model;
  std::string at;
};

int cmd_inspect(const InspectCfg& cfg, std::ostream& out, std::ostream&) {
  const AlgebroidModel M = resolve_model(cfg.model);
  out << "model " << M.name() << ": n = " << M.n() << ", m = " << M.m()
      << '\n';

  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> dist(-1.5, 1.5);
  double al_max = 0.0;
  double jac_max = 0.0;
  const int kProbes = 50;
  for (int s = 0; s < kProbes; ++s) {
    Eigen::VectorXd x(M.n());
    for (int i = 0; i < M.n(); ++i) x[i] = dist(rng);
    al_max = std::max(al_max, almost_lie_residual(M, x));
    jac_max = std::max(jac_max, jacobi_residual(M, x));
  }
  out << "anchor-bracket compatibility: max residual "
      << format_double(al_max) << " over " << kProbes << " points";
  if (al_max > 1e-9) out << "  ** NOT ALMOST-LIE **";
  out << '\n';
  out << "cyclic bracket defect: max residual " << format_double(jac_max)
      << " over " << kProbes << " points\n";

  Eigen::VectorXd x, xi;
  parse_point_spec(cfg.at, M.n(), M.m(), "xi", x, xi);
  const PhasePoint p = M.point(Side::Dual, x, xi);
  const std::string where = describe_point(M, p, "xi");
  out << "bi-vector matrix at " << where << ":\n";
  print_matrix(out, lambda_matrix(M, p));
  out << "canonical two-form matrix at " << where << ":\n";
  print_matrix(out, omega_matrix(M, p));
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"coordinate engine for mechanics on anchored vector bundles"};
  app.name("algmech");
  app.require_subcommand(1);
  // --h is the Hamiltonian expression flag, so help must not claim -h/--h.
  app.set_help_flag("--help", "print help and exit");

  VerifyCfg vcfg;
  CLI::App* verify = app.add_subcommand(
      "verify", "run the property-check suite and report residuals");
  verify->set_help_flag("--help", "print help and exit");
  verify->add_option("--model", vcfg.model,
                     "builtin name or model JSON path (default: all builtins)");
  verify->add_option("--samples", vcfg.samples, "draws per check")
      ->check(CLI::PositiveNumber);
  verify->add_option("--seed", vcfg.seed, "random seed");
  verify->add_option("--tol", vcfg.tol,
                     "tolerance override for expected-pass checks")
      ->check(CLI::PositiveNumber);
  verify->add_option("--out", vcfg.out_path, "JSON-lines report path");

  SimulateCfg scfg;
  CLI::App* simulate =
      app.add_subcommand("simulate", "integrate a trajectory and write CSV");
  simulate->set_help_flag("--help", "print help and exit");
  simulate->add_option("--model", scfg.model, "builtin name or model JSON path")
      ->required();
  simulate
      ->add_option("--formalism", scfg.formalism,
                   "hamiltonian | forced | lagrangian-tt | lagrangian-prolong")
      ->required()
      ->check(CLI::IsMember({"hamiltonian", "forced", "lagrangian-tt",
                             "lagrangian-prolong"}));
  simulate->add_option("--h", scfg.h, "Hamiltonian expression in x.., xi..");
  simulate->add_option("--h-file", scfg.h_file, "file with the Hamiltonian");
  simulate->add_option("--l", scfg.l, "Lagrangian expression in x.., y..");
  simulate->add_option("--l-file", scfg.l_file, "file with the Lagrangian");
  simulate->add_option("--force", scfg.force,
                       "';'-separated force components in x.., xi..");
  simulate->add_option("--force-file", scfg.force_file,
                       "file with the force components");
  simulate->add_option("--x0", scfg.x0, "initial base point (comma list)");
  simulate->add_option("--f0", scfg.f0, "initial fiber point (comma list)");
  simulate->add_option("--dt", scfg.dt, "step size")
      ->required()
      ->check(CLI::PositiveNumber);
  simulate->add_option("--t-end", scfg.t_end, "final time")
      ->required()
      ->check(CLI::PositiveNumber);
  simulate->add_option("--out", scfg.out_path, "CSV path (default: stdout)");

  InspectCfg icfg;
  CLI::App* inspect = app.add_subcommand(
      "inspect", "print dimensions, structure residuals and frame matrices");
  inspect->set_help_flag("--help", "print help and exit");
  inspect->add_option("--model", icfg.model, "builtin name or model JSON path")
      ->required();
  inspect->add_option("--at", icfg.at,
                      "dual-side point spec, e.g. \"x=1,0;xi=0,0,1\"");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    if (verify->parsed()) return cmd_verify(vcfg, out, err);
    if (simulate->parsed()) return cmd_simulate(scfg, out, err);
    return cmd_inspect(icfg, out, err);
  } catch (const SingularError& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const ModelError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace algmech
