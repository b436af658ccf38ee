// Batch driver: evaluate kernels/operators, run verification suites, and
// aggregate reports into plot-ready tables.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dunkl/io.hpp"
#include "dunkl/kernels.hpp"
#include "dunkl/operators.hpp"
#include "dunkl/verify.hpp"

namespace {

using namespace dunkl;

int emit_error(int code, const std::string& message, const std::string& context) {
  json err;
  err["code"] = code;
  err["message"] = message;
  err["context"] = context;
  std::cerr << err.dump() << "\n";
  return code;
}

void write_out(const std::string& out, const std::string& content) {
  if (out == "-")
    std::cout << content;
  else
    atomic_write(out, content);
}

struct RunConfig {
  std::size_t n = 1;
  std::vector<double> lambda{0.0};
  std::vector<int> eta{0};
  int K = 0;
  std::vector<int> M;
  double t = 1.0;
  double sigma = 1.0;
  double gamma = -1.0;  // negative = family default
  std::string kernel;
  std::string op;
  std::string suite;
  std::string pairs;
  std::string out = "-";
  std::uint64_t seed = 1;
  std::size_t count = 0;  // 0 = per-suite default
  double x_max = 10.0;
  std::size_t nodes = 96;

  MultiplicityVector multiplicities() const {
    if (lambda.size() != n) throw DomainError("config: lambda must have n entries");
    return MultiplicityVector{lambda};
  }
  SignVector sign_vector() const {
    if (eta.size() != n) throw DomainError("config: eta must have n bits");
    return SignVector{eta};
  }
  std::vector<int> orders() const {
    if (M.empty()) return std::vector<int>(n, 0);
    if (M.size() != n) throw DomainError("config: M must have n entries");
    return M;
  }
};

/// JSON config with flag overrides (flags win); unknown keys rejected.
void apply_config_file(const std::string& path, RunConfig& cfg, const CLI::App& cmd) {
  std::ifstream in(path);
  if (!in) throw DomainError("config: cannot open " + path);
  json j;
  in >> j;
  if (!j.is_object()) throw DomainError("config: top level must be an object");
  auto flag_given = [&](const std::string& flag) {
    const CLI::Option* opt = cmd.get_option_no_throw("--" + flag);
    return opt != nullptr && opt->count() > 0;
  };
  for (const auto& [key, val] : j.items()) {
    if (flag_given(key)) continue;
    if (key == "n")
      cfg.n = val.get<std::size_t>();
    else if (key == "lambda")
      cfg.lambda = val.get<std::vector<double>>();
    else if (key == "eta")
      cfg.eta = val.get<std::vector<int>>();
    else if (key == "K")
      cfg.K = val.get<int>();
    else if (key == "M")
      cfg.M = val.get<std::vector<int>>();
    else if (key == "t")
      cfg.t = val.get<double>();
    else if (key == "sigma")
      cfg.sigma = val.get<double>();
    else if (key == "gamma")
      cfg.gamma = val.get<double>();
    else if (key == "kernel")
      cfg.kernel = val.get<std::string>();
    else if (key == "op")
      cfg.op = val.get<std::string>();
    else if (key == "suite")
      cfg.suite = val.get<std::string>();
    else if (key == "pairs")
      cfg.pairs = val.get<std::string>();
    else if (key == "out")
      cfg.out = val.get<std::string>();
    else if (key == "seed")
      cfg.seed = val.get<std::uint64_t>();
    else if (key == "count")
      cfg.count = val.get<std::size_t>();
    else if (key == "x_max")
      cfg.x_max = val.get<double>();
    else if (key == "nodes")
      cfg.nodes = val.get<std::size_t>();
    else
      throw DomainError("config: unknown key '" + key + "'");
  }
}

// ---------------------------------------------------------------------------
// eval
// ---------------------------------------------------------------------------

std::vector<KernelEvalRow> read_pairs(const std::string& path, std::size_t n, double t_default) {
  std::ifstream in(path);
  if (!in) throw DomainError("pairs: cannot open " + path);
  std::vector<KernelEvalRow> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> cols;
    std::stringstream ss(line);
    std::string cell;
    bool numeric = true;
    while (std::getline(ss, cell, ',')) {
      try {
        cols.push_back(std::stod(cell));
      } catch (const std::exception&) {
        numeric = false;
        break;
      }
    }
    if (!numeric) continue;  // header line
    if (cols.size() != 2 * n && cols.size() != 2 * n + 1)
      throw DomainError("pairs: row needs 2n or 2n+1 columns");
    KernelEvalRow row;
    row.x.assign(cols.begin(), cols.begin() + n);
    row.y.assign(cols.begin() + n, cols.begin() + 2 * n);
    row.t = cols.size() == 2 * n + 1 ? cols.back() : t_default;
    rows.push_back(std::move(row));
  }
  return rows;
}

int cmd_eval(const RunConfig& cfg) {
  auto lambda = cfg.multiplicities();
  auto eta = cfg.sign_vector();
  auto M = cfg.orders();

  if (!cfg.kernel.empty()) {
    if (cfg.kernel != "heat" && cfg.kernel != "poisson")
      throw DomainError("eval: --kernel must be heat or poisson");
    std::vector<KernelEvalRow> rows;
    if (!cfg.pairs.empty()) rows = read_pairs(cfg.pairs, cfg.n, cfg.t);
    DerivativeSpec spec = DerivativeSpec::none(cfg.n);
    spec.K = cfg.K;
    spec.M = M;
    parallel_for(rows.size(), [&](std::size_t i) {
      HeatKernelParams p{lambda, eta, rows[i].t};
      rows[i].value = cfg.kernel == "heat" ? kernel_derivative(p, spec, rows[i].x, rows[i].y)
                                           : poisson_kernel_derivative(p, spec, rows[i].x,
                                                                       rows[i].y);
    });
    write_out(cfg.out, kernel_eval_csv(lambda, eta, cfg.K, M, rows));
    return 0;
  }

  if (cfg.op == "g") {
    if (cfg.n != 1) throw DomainError("eval: --op g supports n = 1");
    auto axes = jacobi_plus_axes(lambda, cfg.x_max, cfg.nodes);
    auto f = make_grid_function(lambda, axes, GridDuty::quadrature, [](const Vec& x) {
      return Complex{std::exp(-x[0] * x[0] / 2.0), 0.0};
    });
    SpectralData sd = make_spectral(f, eta, axes);
    Vec t_grid = logspace(1e-6, 1e6, 200);
    GridFunction out = f;
    Vec vals(axes[0].nodes.size());
    parallel_for(vals.size(), [&](std::size_t i) {
      vals[i] = g_function(f, sd, cfg.K, M, {axes[0].nodes[i]}, t_grid);
    });
    KahanSum num;
    for (std::size_t i = 0; i < vals.size(); ++i) {
      out.values[i] = Complex{vals[i], 0.0};
      num.add(axes[0].weights[i] * vals[i] * vals[i]);
    }
    double nf = l2_norm_plus(f);
    json meta;
    meta["family"] = "g";
    meta["K"] = cfg.K;
    meta["M"] = M;
    meta["norm_ratio"] = std::sqrt(num.value()) / nf;
    write_out(cfg.out, grid_function_csv(out, meta));
    return 0;
  }

  throw DomainError("eval: need --kernel {heat,poisson} or --op g");
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

KernelFamily family_by_name(const std::string& name) {
  if (name == "heat") return KernelFamily::heat_maximal;
  if (name == "g") return KernelFamily::g_function;
  if (name == "laplace") return KernelFamily::laplace_multiplier;
  if (name == "stieltjes") return KernelFamily::stieltjes_multiplier;
  if (name == "riesz") return KernelFamily::riesz;
  if (name == "lusin") return KernelFamily::lusin;
  if (name == "poisson-lusin") return KernelFamily::poisson_lusin;
  throw DomainError("verify: unknown kernel '" + name + "'");
}

KernelUnderTest kernel_under_test(const RunConfig& cfg) {
  KernelUnderTest k;
  k.family = family_by_name(cfg.kernel);
  k.lambda = cfg.multiplicities();
  k.eta = cfg.sign_vector();
  k.K = cfg.K;
  k.M = cfg.orders();
  k.sigma = cfg.sigma;
  if (k.family == KernelFamily::g_function || k.cone_valued()) {
    int mtot = 0;
    for (int m : k.M) mtot += m;
    if (k.K + mtot == 0) k.K = 1;
  }
  if (k.family == KernelFamily::riesz) {
    int mtot = 0;
    for (int m : k.M) mtot += m;
    if (mtot == 0) k.M[0] = 1;
  }
  if (cfg.gamma > 0.0) {
    k.gamma = cfg.gamma;
  } else if (k.cone_valued()) {
    double lmin = k.lambda[0];
    for (std::size_t j = 1; j < k.lambda.dim(); ++j) lmin = std::min(lmin, k.lambda[j]);
    k.gamma = std::min(0.5, 0.9 * (lmin + 0.5));
  } else {
    k.gamma = 1.0;
  }
  if (k.cone_valued()) k.t_points = 60;
  k.validate();  // reject bad configs before any computation
  return k;
}

int cmd_verify(const RunConfig& cfg) {
  std::vector<VerificationReport> reports;
  auto lambda = cfg.multiplicities();

  auto lemma_config = [&](std::size_t def) {
    LemmaConfig lc;
    lc.count = cfg.count != 0 ? cfg.count : def;
    lc.seed = cfg.seed;
    lc.lambda = lambda;
    lc.eta = cfg.sign_vector();
    return lc;
  };

  if (cfg.suite == "identities" || cfg.suite == "all") {
    auto ids = identity_suite(cfg.seed);
    reports.insert(reports.end(), ids.begin(), ids.end());
  }
  if (cfg.suite == "lemmas" || cfg.suite == "all") {
    for (const char* name : {"theta", "qz", "xiineq"})
      reports.push_back(lemma_suite(name, lemma_config(10000)));
    for (const char* name : {"intXi", "intdifXi", "intXi2", "ball_comparability", "double"})
      reports.push_back(lemma_suite(name, lemma_config(400)));
    reports.push_back(lemma_suite("EST_envelope", lemma_config(300)));
    reports.push_back(lemma_suite("EST2_integral", lemma_config(120)));
  }
  if (cfg.suite == "growth" || cfg.suite == "smoothness" || cfg.suite == "estimates") {
    if (cfg.kernel.empty()) throw DomainError("verify: suite '" + cfg.suite + "' needs --kernel");
    auto k = kernel_under_test(cfg);
    CheckConfig cc;
    cc.count = cfg.count != 0 ? cfg.count : (k.family == KernelFamily::poisson_lusin ? 40 : 120);
    cc.seed = cfg.seed;
    if (cfg.suite != "smoothness") reports.push_back(growth_check(k, cc));
    if (cfg.suite != "growth") {
      reports.push_back(smoothness_check(k, SmoothnessSide::x_arg, cc));
      reports.push_back(smoothness_check(k, SmoothnessSide::y_arg, cc));
    }
  }
  if (reports.empty())
    throw DomainError("verify: --suite must be identities, lemmas, growth, smoothness, "
                      "estimates, or all");

  write_out(cfg.out, reports_json(reports, lambda));
  for (const auto& rep : reports)
    if (!rep.pass) return 1;
  return 0;
}

// ---------------------------------------------------------------------------
// report
// ---------------------------------------------------------------------------

int cmd_report(const std::vector<std::string>& inputs, const std::string& out) {
  namespace fs = std::filesystem;
  if (inputs.empty()) throw DomainError("report: no input report files");
  struct Row {
    std::string csv;
    fs::file_time_type stamp;
  };
  std::map<std::string, Row> rows;  // keyed by (check, lambda, n); latest wins
  for (const auto& path : inputs) {
    std::ifstream in(path);
    if (!in) throw DomainError("report: cannot open " + path);
    json arr;
    in >> arr;
    if (!arr.is_array()) throw DomainError("report: " + path + " is not a report array");
    auto stamp = fs::last_write_time(path);
    for (const auto& j : arr) {
      std::string lam;
      for (const auto& v : j.value("lambda", json::array()))
        lam += (lam.empty() ? "" : ";") + format_full(v.get<double>());
      std::size_t n = j.value("n", std::size_t{0});
      std::string check = j.at("check_name").get<std::string>();
      std::ostringstream line;
      line << check << "," << lam << "," << n << ","
           << format_full(j.at("fitted_constant").get<double>()) << ","
           << format_full(j.at("worst_ratio").get<double>()) << ","
           << (j.at("pass").get<bool>() ? "true" : "false") << "\n";
      std::string key = check + "|" + lam + "|" + std::to_string(n);
      auto it = rows.find(key);
      if (it == rows.end()) {
        rows.emplace(key, Row{line.str(), stamp});
      } else {
        std::cerr << "warning: duplicate check '" << check << "', keeping latest\n";
        if (stamp >= it->second.stamp) it->second = Row{line.str(), stamp};
      }
    }
  }
  std::ostringstream csv;
  csv << "check,lambda,n,fitted_constant,worst_ratio,pass\n";
  for (const auto& [key, row] : rows) csv << row.csv;
  write_out(out, csv.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dunkl harmonic-analysis toolkit"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string config_path;
  std::vector<std::string> report_inputs;
  std::string report_out = "-";

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON config file (flags win)");
    cmd->add_option("--n", cfg.n, "dimension");
    cmd->add_option("--lambda", cfg.lambda, "multiplicity entries")->expected(-1);
    cmd->add_option("--eta", cfg.eta, "parity bits")->expected(-1);
    cmd->add_option("--K", cfg.K, "time-derivative order");
    cmd->add_option("--M", cfg.M, "difference-derivative orders")->expected(-1);
    cmd->add_option("--t", cfg.t, "time parameter");
    cmd->add_option("--sigma", cfg.sigma, "imaginary-power exponent");
    cmd->add_option("--gamma", cfg.gamma, "smoothness exponent (default per family)");
    cmd->add_option("--seed", cfg.seed, "RNG seed");
    cmd->add_option("--count", cfg.count, "sample count override");
    cmd->add_option("--x-max", cfg.x_max, "grid extent");
    cmd->add_option("--nodes", cfg.nodes, "grid nodes per axis");
    cmd->add_option("--out", cfg.out, "output path ('-' = stdout)");
  };

  CLI::App* eval = app.add_subcommand("eval", "evaluate a kernel or operator to CSV");
  add_common(eval);
  eval->add_option("--kernel", cfg.kernel, "kernel family: heat | poisson");
  eval->add_option("--op", cfg.op, "operator: g");
  eval->add_option("--pairs", cfg.pairs, "CSV of x...,y...[,t] evaluation pairs");

  CLI::App* verify = app.add_subcommand("verify", "run verification suites to JSON");
  add_common(verify);
  verify->add_option("--suite", cfg.suite,
                     "identities | lemmas | growth | smoothness | estimates | all");
  verify->add_option("--kernel", cfg.kernel,
                     "kernel family for growth/smoothness/estimates suites");

  CLI::App* report = app.add_subcommand("report", "aggregate report JSONs to a CSV table");
  report->add_option("inputs", report_inputs, "report JSON files");
  report->add_option("--out", report_out, "output path ('-' = stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return emit_error(2, "invalid command line", e.what());
  }

  try {
    CLI::App* cmd = app.get_subcommands().front();
    if (!config_path.empty() && cmd->get_name() != "report")
      apply_config_file(config_path, cfg, *cmd);
    if (cmd->get_name() == "eval") return cmd_eval(cfg);
    if (cmd->get_name() == "verify") return cmd_verify(cfg);
    return cmd_report(report_inputs, report_out);
  } catch (const DomainError& e) {
    return emit_error(2, "invalid configuration", e.what());
  } catch (const std::exception& e) {
    return emit_error(2, "internal error", e.what());
  }
}
