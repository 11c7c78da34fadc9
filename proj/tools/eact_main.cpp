#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "eact/channel_spec.hpp"
#include "eact/coding_sim.hpp"
#include "eact/divergence.hpp"
#include "eact/optimize.hpp"
#include "eact/verify.hpp"

namespace {

using namespace eact;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitSolver = 3;

std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::vector<double> parse_list(const std::string& s, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw DomainError("could not parse " + what + " entry: '" + item + "'");
    }
  }
  if (out.empty()) throw DomainError(what + " list is empty");
  return out;
}

std::vector<Index> parse_index_list(const std::string& s, const std::string& what) {
  std::vector<Index> out;
  for (double v : parse_list(s, what)) {
    const Index i = static_cast<Index>(std::llround(v));
    if (i < 1 || std::abs(v - double(i)) > 1e-12)
      throw DomainError(what + " entries must be positive integers");
    out.push_back(i);
  }
  return out;
}

double env_or(const char* name, double fallback) {
  if (const char* v = std::getenv(name)) {
    try {
      return std::stod(v);
    } catch (const std::exception&) {
      throw DomainError(std::string("bad value in environment variable ") + name);
    }
  }
  return fallback;
}

struct OutputSink {
  std::unique_ptr<std::ofstream> file;
  std::ostream* os = &std::cout;

  void open(const std::string& path) {
    if (path.empty()) return;
    file = std::make_unique<std::ofstream>(path);
    if (!*file) throw DomainError("cannot open output file: " + path);
    os = file.get();
  }
  std::ostream& out() { return *os; }
};

SolveOptions solve_options(double tolerance, unsigned seed) {
  SolveOptions opts;
  opts.inner_tol = env_or("EACT_INNER_TOL", tolerance > 0 ? tolerance : opts.inner_tol);
  opts.outer_tol = env_or("EACT_OUTER_TOL", opts.outer_tol);
  opts.seed = seed;
  return opts;
}

int cmd_divergence(const std::string& rho_arg, const std::string& sigma_arg,
                   const std::string& alpha_arg, const std::string& out_path,
                   const std::string& format) {
  const DensityOperator rho = load_state(rho_arg);
  const DensityOperator sigma = load_state(sigma_arg);
  const auto alphas = parse_list(alpha_arg, "alpha");
  OutputSink sink;
  sink.open(out_path);
  if (format == "csv")
    sink.out() << "alpha,sandwiched_bits,log_euclidean_bits,regularized,converged,support_tol\n";
  for (double a : alphas) {
    const RenyiOrder ord = std::abs(a - 1.0) < 1e-12 ? RenyiOrder::limit() : RenyiOrder::of(a);
    const DivergenceValue ds = sandwiched_divergence(rho.mat, sigma.mat, ord);
    LogEuclideanDiagnostics diag;
    const DivergenceValue db = log_euclidean_divergence(rho.mat, sigma.mat, ord, &diag);
    const std::string svals = ds.is_infinite() ? "inf" : fmt(ds.bits);
    const std::string bvals = db.is_infinite() ? "inf" : fmt(db.bits);
    if (format == "csv") {
      sink.out() << fmt(a) << ',' << svals << ',' << bvals << ','
                 << (diag.regularized ? 1 : 0) << ',' << (diag.converged ? 1 : 0) << ','
                 << fmt(tol::support_membership) << '\n';
    } else {
      sink.out() << "{\"alpha\":" << fmt(a) << ",\"sandwiched_bits\":\"" << svals
                 << "\",\"log_euclidean_bits\":\"" << bvals
                 << "\",\"regularized\":" << (diag.regularized ? "true" : "false")
                 << ",\"converged\":" << (diag.converged ? "true" : "false")
                 << ",\"support_tol\":" << fmt(tol::support_membership) << "}\n";
    }
  }
  return kExitOk;
}

int cmd_channel_info(const std::string& channel_arg, const std::string& alpha_arg,
                     double tolerance, unsigned seed, const std::string& out_path,
                     const std::string& format) {
  const ChannelSpec spec = load_channel(channel_arg);
  const auto alphas = parse_list(alpha_arg, "alpha");
  const SolveOptions opts = solve_options(tolerance, seed);
  OutputSink sink;
  sink.open(out_path);
  if (format == "csv")
    sink.out() << "alpha,info_bits,grad_norm,inner_iterations,outer_iterations,"
                  "converged,restart_spread,inner_tol,outer_tol\n";
  bool solver_trouble = false;
  for (double a : alphas) {
    const RenyiOrder ord = std::abs(a - 1.0) < 1e-12 ? RenyiOrder::limit() : RenyiOrder::of(a);
    const ChannelInfoResult r = channel_renyi_info(spec.channel, ord, opts);
    if (!r.converged) solver_trouble = true;
    if (format == "csv") {
      sink.out() << fmt(a) << ',' << fmt(r.value) << ',' << fmt(r.grad_norm) << ','
                 << r.inner_iterations << ',' << r.outer_iterations << ','
                 << (r.converged ? 1 : 0) << ',' << fmt(r.restart_spread) << ','
                 << fmt(opts.inner_tol) << ',' << fmt(opts.outer_tol) << '\n';
    } else {
      sink.out() << "{\"alpha\":" << fmt(a) << ",\"info_bits\":" << fmt(r.value)
                 << ",\"grad_norm\":" << fmt(r.grad_norm)
                 << ",\"inner_iterations\":" << r.inner_iterations
                 << ",\"outer_iterations\":" << r.outer_iterations
                 << ",\"converged\":" << (r.converged ? "true" : "false")
                 << ",\"restart_spread\":" << fmt(r.restart_spread)
                 << ",\"inner_tol\":" << fmt(opts.inner_tol)
                 << ",\"outer_tol\":" << fmt(opts.outer_tol) << "}\n";
    }
  }
  return solver_trouble ? kExitSolver : kExitOk;
}

int cmd_exponent_curve(const std::string& channel_arg, const std::string& rates_arg,
                       double window_delta, double tolerance, unsigned seed,
                       const std::string& out_path) {
  const ChannelSpec spec = load_channel(channel_arg);
  const auto rates = parse_list(rates_arg, "rates");
  OutputSink sink;
  sink.open(out_path);
  sink.out() << "R, sc, lambda_star, alpha_star, truncation_bound, inner_iterations, status\n";
  bool solver_trouble = false;
  for (double r : rates) {
    if (r <= 0.0) throw DomainError("rates must be positive");
    ExponentQuery q;
    q.rate = r;
    q.window_delta = window_delta;
    q.lambda_tol = env_or("EACT_LAMBDA_TOL", q.lambda_tol);
    q.solve = solve_options(tolerance, seed);
    const ExponentResult res = strong_converse_exponent(spec.channel, q);
    if (res.status != "ok") solver_trouble = true;
    sink.out() << fmt(r) << ", " << fmt(res.sc) << ", " << fmt(res.lambda_star) << ", "
               << fmt(res.alpha_star) << ", " << fmt(res.truncation_bound) << ", "
               << res.inner_iterations << ", " << res.status << '\n';
  }
  return solver_trouble ? kExitSolver : kExitOk;
}

int cmd_simulate(const std::string& channel_arg, const std::string& rates_arg,
                 const std::string& blocklengths_arg, unsigned seed,
                 const std::string& out_path) {
  const ChannelSpec spec = load_channel(channel_arg);
  const auto rates = parse_list(rates_arg, "rates");
  const auto lens = parse_index_list(blocklengths_arg, "blocklengths");
  OutputSink sink;
  sink.open(out_path);
  for (double r : rates) {
    const SimulationResult res = simulate(spec.channel, r, lens, seed);
    for (const auto& rec : res.records) {
      sink.out() << "{\"rate\":" << fmt(r) << ",\"blocklength\":" << rec.blocklength
                 << ",\"messages\":" << rec.messages
                 << ",\"p_success\":" << fmt(rec.p_success) << ",\"seed\":" << rec.seed
                 << ",\"decoder\":\"square-root-measurement\"}\n";
    }
    if (res.fit.points_used >= 3) {
      sink.out() << "{\"rate\":" << fmt(r) << ",\"fit_slope\":" << fmt(res.fit.slope)
                 << ",\"fit_residual\":" << fmt(res.fit.residual)
                 << ",\"points_used\":" << res.fit.points_used
                 << ",\"seed\":" << res.seed << "}\n";
    }
  }
  return kExitOk;
}

int cmd_verify(const std::string& suite, unsigned seed, const std::string& out_path) {
  OutputSink sink;
  sink.open(out_path);
  const SuiteReport rep = run_suite(suite, seed);
  for (const auto& c : rep.checks) {
    sink.out() << "[" << (c.failures == 0 ? "PASS" : "FAIL") << "] " << rep.suite << ": "
               << c.name << " (" << c.instances << " instances, " << c.failures
               << " failures, worst margin " << fmt(c.worst_margin) << ")\n";
  }
  sink.out() << (rep.passed() ? "OK" : "FAILED") << " suite " << rep.suite << " seed "
             << rep.seed << '\n';
  return rep.passed() ? kExitOk : kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Renyi divergences, channel information, strong converse exponents "
               "and an entanglement-assisted coding simulator"};
  app.require_subcommand(1);

  std::string channel_arg, rho_arg, sigma_arg, alpha_arg, rates_arg, lens_arg;
  std::string out_path, format = "csv", suite;
  double window_delta = 1e-4;
  double tolerance = 0.0;  // 0 = library default
  unsigned seed = 1;

  auto* div = app.add_subcommand("divergence", "Sandwiched and log-Euclidean divergences");
  div->add_option("--rho", rho_arg, "first state: diag:p1,p2,... or JSON file")->required();
  div->add_option("--sigma", sigma_arg, "second state")->required();
  div->add_option("--alpha", alpha_arg, "comma-separated Renyi orders")->required();
  div->add_option("--out", out_path, "output path (default stdout)");
  div->add_option("--format", format, "csv or jsonl")->check(CLI::IsMember({"csv", "jsonl"}));

  auto* info = app.add_subcommand("channel-info", "Channel Renyi information");
  info->add_option("--channel", channel_arg, "JSON file or preset:name:params")->required();
  info->add_option("--alpha", alpha_arg, "comma-separated Renyi orders")->required();
  info->add_option("--tolerance", tolerance, "inner solver tolerance");
  info->add_option("--seed", seed, "solver restart seed");
  info->add_option("--out", out_path, "output path (default stdout)");
  info->add_option("--format", format, "csv or jsonl")->check(CLI::IsMember({"csv", "jsonl"}));

  auto* curve = app.add_subcommand("exponent-curve", "Strong converse exponent over a rate grid");
  curve->add_option("--channel", channel_arg, "JSON file or preset:name:params")->required();
  curve->add_option("--rates", rates_arg, "comma-separated rates in bits")->required();
  curve->add_option("--lambda-window", window_delta, "window margin delta");
  curve->add_option("--tolerance", tolerance, "inner solver tolerance");
  curve->add_option("--seed", seed, "solver restart seed");
  curve->add_option("--out", out_path, "output path (default stdout)");

  auto* sim = app.add_subcommand("simulate", "Random-code success-probability simulator");
  sim->add_option("--channel", channel_arg, "JSON file or preset:name:params")->required();
  sim->add_option("--rates", rates_arg, "comma-separated rates in bits")->required();
  sim->add_option("--blocklengths", lens_arg, "comma-separated blocklengths")->required();
  sim->add_option("--seed", seed, "code sampling seed");
  sim->add_option("--out", out_path, "output path (default stdout)");

  auto* verify = app.add_subcommand("verify", "Run a named invariant suite");
  verify->add_option("suite", suite, "commuting | prop1 | pinching | lemma1 | types")
      ->required();
  verify->add_option("--seed", seed, "instance generation seed");
  verify->add_option("--out", out_path, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (div->parsed()) return cmd_divergence(rho_arg, sigma_arg, alpha_arg, out_path, format);
    if (info->parsed())
      return cmd_channel_info(channel_arg, alpha_arg, tolerance, seed, out_path, format);
    if (curve->parsed())
      return cmd_exponent_curve(channel_arg, rates_arg, window_delta, tolerance, seed, out_path);
    if (sim->parsed()) return cmd_simulate(channel_arg, rates_arg, lens_arg, seed, out_path);
    if (verify->parsed()) return cmd_verify(suite, seed, out_path);
  } catch (const SolverError& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return kExitSolver;
  } catch (const SizeLimitError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const DomainError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const ShapeError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const InvariantError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitValidation;
}
