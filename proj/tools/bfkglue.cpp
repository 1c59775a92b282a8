// bfkglue command-line driver: coefficient reports, numeric verification
// experiments and randomised self tests.
//
// Exit codes: 0 pass, 1 verification failure, 2 configuration or usage error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "bfkglue/io.hpp"
#include "bfkglue/selftest.hpp"

namespace {

using namespace bfkglue;
namespace fs = std::filesystem;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;

/// Exact value of a decimal or "p/q" string.
Rational parse_rational_arg(const std::string& s) {
  const auto slash = s.find('/');
  try {
    if (slash != std::string::npos) {
      const boost::multiprecision::cpp_int p(s.substr(0, slash)), q(s.substr(slash + 1));
      if (q == 0) throw ConfigError("--lambda", "zero denominator");
      return Rational(p, q);
    }
    std::size_t pos = 0;
    (void)std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    std::string mant = s, exp_part;
    if (const auto e = s.find_first_of("eE"); e != std::string::npos) {
      mant = s.substr(0, e);
      exp_part = s.substr(e + 1);
    }
    int exponent = exp_part.empty() ? 0 : std::stoi(exp_part);
    bool negative = false;
    if (!mant.empty() && (mant[0] == '-' || mant[0] == '+')) {
      negative = mant[0] == '-';
      mant = mant.substr(1);
    }
    if (const auto dot = mant.find('.'); dot != std::string::npos) {
      exponent -= static_cast<int>(mant.size() - dot - 1);
      mant.erase(dot, 1);
    }
    if (mant.empty()) throw std::invalid_argument(s);
    boost::multiprecision::cpp_int digits(mant), scale = 1;
    for (int i = 0; i < std::abs(exponent); ++i) scale *= 10;
    Rational r = exponent >= 0 ? Rational(digits * scale) : Rational(digits, scale);
    return negative ? Rational(-r) : r;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    throw ConfigError("--lambda", "expected a decimal or p/q value, got '" + s + "'");
  }
}

/// Writes `content` to `path` (or stdout when empty) only after it is fully built.
void emit(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  const fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  const fs::path tmp = p.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw ConfigError(path, "cannot write output file");
    out << content;
  }
  fs::rename(tmp, p);
}

int resolve_jobs(std::optional<int> flag) {
  if (flag) return std::max(*flag, 1);
  if (const char* env = std::getenv("BFKGLUE_JOBS")) {
    try {
      return std::max(std::stoi(env), 1);
    } catch (const std::exception&) {
      throw ConfigError("BFKGLUE_JOBS", "expected an integer");
    }
  }
  return 1;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');)
    if (!item.empty()) out.push_back(item);
  return out;
}

int cmd_coeffs(const std::string& config, const std::string& lambda_arg, const std::string& out, bool symbols) {
  const json doc = read_json_file(config);
  const MetricJet<Rational> jet = parse_jet<Rational>(doc);
  try {
    jet.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(config, e.what());
  }
  const Rational lambda = parse_rational_arg(lambda_arg);
  json report = coefficient_report(jet, lambda);
  if (symbols) {
    const auto dtn = dtn_symbols(jet, Variant::kWeightTwo, 3);
    const auto res = resolvent_symbols(dtn, 3);
    json s;
    for (int j = 0; j < 3; ++j) {
      s["theta_" + std::to_string(1 - j)] = symbol_to_json(dtn.theta[static_cast<std::size_t>(j)]);
      s["r_" + std::to_string(-1 - j)] = symbol_to_json(res.layers[static_cast<std::size_t>(j)]);
    }
    report["symbols"] = s;
  }
  emit(out, report.dump(2) + "\n");
  return report["checks"]["pipeline_equals_closed_form"].get<bool>() ? kExitPass : kExitFail;
}

int cmd_verify(const std::string& config, const std::string& experiments, const std::string& out_dir,
               std::optional<double> tol, int jobs) {
  ModelConfig cfg = parse_model_config(read_json_file(config));
  if (tol) {
    if (!(*tol > 0)) throw ConfigError("--tol", "must be positive");
    cfg.tol = *tol;
  }
  std::vector<std::string> ids = experiments.empty() ? experiment_ids() : split_list(experiments);
  for (const auto& id : ids)
    if (std::find(experiment_ids().begin(), experiment_ids().end(), id) == experiment_ids().end())
      throw ConfigError("--experiments", "unknown experiment '" + id + "'");

  std::vector<ExperimentReport> reports(ids.size());
  std::vector<std::string> errors(ids.size());
  auto work = [&](std::size_t first, std::size_t stride) {
    for (std::size_t k = first; k < ids.size(); k += stride) {
      try {
        reports[k] = run_experiment(ids[k], cfg);
      } catch (const std::exception& e) {
        errors[k] = e.what();
      }
    }
  };
  const std::size_t n = std::min<std::size_t>(static_cast<std::size_t>(jobs), ids.size());
  if (n <= 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < n; ++t) pool.emplace_back(work, t, n);
    for (auto& th : pool) th.join();
  }

  bool all = true;
  for (std::size_t k = 0; k < ids.size(); ++k) {
    if (!errors[k].empty()) {
      std::cout << ids[k] << ": FAIL (error: " << errors[k] << ")\n";
      all = false;
      continue;
    }
    const ExperimentReport& r = reports[k];
    const fs::path dir = fs::path(out_dir) / r.id;
    emit((dir / "report.json").string(), report_json(r, cfg).dump(2) + "\n");
    emit((dir / "plot.csv").string(), plot_csv(r));
    std::cerr << r.id << ": runtime " << r.runtime_seconds << " s\n";
    if (r.verdict) {
      std::cout << r.id << ": PASS\n";
    } else {
      all = false;
      std::cout << r.id << ": FAIL";
      for (const auto& c : r.comparisons)
        if (!c.pass) std::cout << " [" << c.name << " observed " << c.observed << " target " << c.target << " error " << c.error << " > " << c.tolerance << "]";
      std::cout << "\n";
    }
  }
  return all ? kExitPass : kExitFail;
}

int cmd_selftest(std::uint64_t seed, int count, int jobs, bool fault, const std::string& out) {
  SelftestOptions opt{seed, count, jobs, fault};
  const SelftestResult r = run_selftest(opt);
  for (const auto& p : r.properties)
    std::cout << p.name << ": " << (p.failures ? "FAIL" : "PASS") << " (" << p.cases - p.failures << "/" << p.cases
              << ", worst defect " << p.worst_defect << ")\n";
  const json j = selftest_json(opt, r);
  if (!out.empty()) emit(out, j.dump(2) + "\n");
  if (!r.pass()) {
    std::cout << "counterexample: " << r.counterexamples.front().dump() << "\n";
    return kExitFail;
  }
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bfkglue: gluing-formula coefficients and numeric verification"};
  app.require_subcommand(1);

  std::string coeffs_config, coeffs_out, coeffs_lambda = "1";
  bool coeffs_symbols = false;
  auto* coeffs = app.add_subcommand("coeffs", "Density report for a boundary jet");
  coeffs->add_option("--config", coeffs_config, "Jet JSON file")->required();
  coeffs->add_option("--lambda", coeffs_lambda, "Spectral parameter for the heat densities (decimal or p/q)")->capture_default_str();
  coeffs->add_option("--out", coeffs_out, "Output file (default stdout)");
  coeffs->add_flag("--symbols", coeffs_symbols, "Include a dump of the theta and resolvent symbols");

  std::string verify_config, verify_experiments, verify_out = "bfkglue-out";
  std::optional<double> verify_tol;
  std::optional<int> verify_jobs;
  std::uint64_t verify_seed = 0;
  auto* verify = app.add_subcommand("verify", "Run numeric verification experiments on a model");
  verify->add_option("--config", verify_config, "Model JSON file")->required();
  verify->add_option("--experiments", verify_experiments, "Comma-separated experiment ids (default all)");
  verify->add_option("--out", verify_out, "Output directory")->capture_default_str();
  verify->add_option("--tol", verify_tol, "Mode-sum tolerance override");
  verify->add_option("--jobs", verify_jobs, "Worker threads (fallback BFKGLUE_JOBS)");
  verify->add_option("--seed", verify_seed, "Accepted for uniformity; experiments are deterministic");

  std::uint64_t st_seed = 0;
  int st_count = 16;
  std::optional<int> st_jobs;
  bool st_fault = false;
  std::string st_out;
  auto* selftest = app.add_subcommand("selftest", "Randomised property suites");
  selftest->add_option("--seed", st_seed, "Seed")->capture_default_str();
  selftest->add_option("--count", st_count, "Cases per property")->capture_default_str()->check(CLI::PositiveNumber);
  selftest->add_option("--jobs", st_jobs, "Worker threads (fallback BFKGLUE_JOBS)");
  selftest->add_flag("--inject-fault", st_fault, "Flip the sign of one contour integral (negative test)");
  selftest->add_option("--out", st_out, "Write the JSON summary to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*coeffs) return cmd_coeffs(coeffs_config, coeffs_lambda, coeffs_out, coeffs_symbols);
    if (*verify) return cmd_verify(verify_config, verify_experiments, verify_out, verify_tol, resolve_jobs(verify_jobs));
    if (*selftest) return cmd_selftest(st_seed, st_count, resolve_jobs(st_jobs), st_fault, st_out);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
  return kExitConfig;
}
