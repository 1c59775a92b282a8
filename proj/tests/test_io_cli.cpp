// JSON schemas and the command-line driver.

#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "bfkglue/io.hpp"

using namespace bfkglue;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

struct RunResult {
  int code = -1;
  std::string out;
};

RunResult run_cli(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + std::string(BFKGLUE_CLI_PATH) + " " + args + " 2>/dev/null";
  RunResult r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof buf, p)) r.out.append(buf, n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string sample(const std::string& name) { return std::string(BFKGLUE_SAMPLES_DIR) + "/" + name; }

class TempDir {
 public:
  TempDir() : path_(fs::temp_directory_path() / ("bfkglue_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter_++))) {
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  fs::path operator/(const std::string& s) const { return path_ / s; }
  const fs::path& path() const { return path_; }

 private:
  static inline int counter_ = 0;
  fs::path path_;
};

void write_file(const fs::path& p, const std::string& s) { std::ofstream(p) << s; }

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string config_error_where(const std::string& text) {
  try {
    parse_jet<double>(parse_json_text(text, "doc"));
  } catch (const ConfigError& e) {
    return e.where();
  }
  return "";
}

}  // namespace

// ---------------------------------------------------------------------------
// Jet schema.
// ---------------------------------------------------------------------------

TEST(JetSchema, ParsesRationalEntries) {
  const auto j = parse_jet<Rational>(read_json_file(sample("jet_general.json")));
  EXPECT_EQ(j.rank_r0, 2);
  EXPECT_EQ(j.tau_N, Rational(2, 3));
  EXPECT_EQ(j.g_n1[0][1], Rational(-1, 5));
  EXPECT_EQ(j.g_n1_d[0][1][1], Rational(1));
  EXPECT_EQ(j.omega_d[0][1][1], Rational(2, 3));
  EXPECT_EQ(j.trace_E(), Rational(1, 6));
}

TEST(JetSchema, OptionalFieldsDefaultToZero) {
  const auto j = parse_jet<double>(read_json_file(sample("jet_flat.json")));
  for (const auto& o : j.omega)
    for (double v : o) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(j.endo_E.size(), 1u);
  EXPECT_EQ(j.g_n1_d[1][1][1], 0.0);
}

TEST(JetSchema, ErrorsNameTheField) {
  const std::string base = R"("rank_r0": 2, "tau_N": 0, "g_n2": [[0,0],[0,0]])";
  EXPECT_EQ(config_error_where("{" + base + R"(, "g_n1": [[0,0],[0]]})"), "/g_n1/1");
  EXPECT_EQ(config_error_where("{" + base + R"(, "g_n1": [[0,1],[0,0]]})"), "/g_n1");
  EXPECT_EQ(config_error_where("{" + base + R"(, "g_n1": [[0,0],[0,0]], "extra": 1})"), "/extra");
  EXPECT_EQ(config_error_where("{" + base + "}"), "/g_n1");
  EXPECT_EQ(config_error_where("{" + base + R"(, "g_n1": [[0,0],[0,0]], "endo_E": [[1,0,0],[0,1]]})"), "/endo_E/0");
  EXPECT_EQ(config_error_where("{" + base + R"(, "g_n1": [[0,0],[0,0]], "endo_E": [[1,{"num":1,"den":0}],[0,1]]})"),
            "/endo_E/0/1/den");
  EXPECT_EQ(config_error_where(R"({"rank_r0": 0, "tau_N": 0, "g_n1": [[0,0],[0,0]], "g_n2": [[0,0],[0,0]]})"), "/rank_r0");
}

TEST(JetSchema, SyntaxErrorsReportLineAndColumn) {
  try {
    parse_json_text("{\n  \"rank_r0\": 1,\n  \"tau_N\": ]\n}", "bad.json");
    FAIL() << "expected a syntax error";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.where(), "bad.json:3:12");
  }
}

TEST(JetSchema, RoundTrip) {
  const auto j = parse_jet<double>(read_json_file(sample("jet_general.json")));
  const auto k = parse_jet<double>(jet_to_json(j));
  EXPECT_EQ(j.g_n2, k.g_n2);
  EXPECT_EQ(j.omega_d[1][0], k.omega_d[1][0]);
  EXPECT_EQ(j.endo_E, k.endo_E);
}

// ---------------------------------------------------------------------------
// Model schema.
// ---------------------------------------------------------------------------

TEST(ModelSchema, DefaultsAreEchoed) {
  const auto c = parse_model_config(read_json_file(sample("sphere.json")));
  const json j = model_config_json(c);
  EXPECT_EQ(j["cross_section"], "sphere");
  EXPECT_EQ(j["lambda_grid"].size(), 12u);
  EXPECT_EQ(j["t_grid"].size(), 30u);
  EXPECT_EQ(j["warped"]["fp"].size(), 10u);
  EXPECT_FALSE(j.contains("l1"));
  EXPECT_EQ(parse_model_config(j).t_grid, c.t_grid);
}

TEST(ModelSchema, RejectsInvalidDocuments) {
  auto where = [](const std::string& text) {
    try {
      parse_model_config(parse_json_text(text, "m"));
    } catch (const ConfigError& e) {
      return e.where();
    }
    return std::string();
  };
  EXPECT_EQ(where(R"({"cross_section": "cube"})"), "/cross_section");
  EXPECT_EQ(where(R"({"cross_section": "torus", "radius": 1})"), "/radius");
  EXPECT_EQ(where(R"({"cross_section": "torus", "L": -1})"), "/L");
  EXPECT_EQ(where(R"({"cross_section": "torus", "lambda_grid": [5, "x"]})"), "/lambda_grid/1");
  EXPECT_EQ(where(R"({"cross_section": "sphere", "unknown": 1})"), "/unknown");
  EXPECT_EQ(where(R"({"cross_section": "sphere", "warped": {"fp": [], "tau_h": 0}})"), "/warped/fp");
}

// ---------------------------------------------------------------------------
// Coefficient report.
// ---------------------------------------------------------------------------

TEST(CoefficientReport, FlatJet) {
  const json r = coefficient_report(MetricJet<Rational>::flat(1), Rational(1));
  const json& d = r["densities"];
  EXPECT_EQ(d["q2"]["times_pi"]["rational"]["num"], "0");
  EXPECT_EQ(d["pi2"]["times_pi"]["ln2"]["num"], "0");
  EXPECT_EQ(d["v2"]["times_pi"]["rational"]["num"], "-1");
  EXPECT_EQ(d["v2"]["times_pi"]["rational"]["den"], "4");
  EXPECT_NEAR(d["v2"]["value"].get<double>(), -1 / (4 * kPi), 1e-16);
  for (const auto& [k, v] : r["checks"].items()) EXPECT_TRUE(v.get<bool>()) << k;
  EXPECT_TRUE(r["breakdown"]["zeta_J2_groups"].contains("A"));
  EXPECT_TRUE(r["breakdown"]["zeta_J2_groups"].contains("E8"));
}

// ---------------------------------------------------------------------------
// Command-line driver.
// ---------------------------------------------------------------------------

TEST(Cli, CoeffsFlatJet) {
  const auto r = run_cli("coeffs --config " + sample("jet_flat.json"));
  ASSERT_EQ(r.code, 0);
  const json j = json::parse(r.out);
  EXPECT_NEAR(j["densities"]["q2"]["value"].get<double>(), 0.0, 0.0);
  EXPECT_NEAR(j["densities"]["pi2"]["value"].get<double>(), 0.0, 0.0);
  EXPECT_NEAR(j["densities"]["v2"]["value"].get<double>(), -1 / (4 * kPi), 1e-16);
}

TEST(Cli, CoeffsEndomorphismIdentity) {
  TempDir tmp;
  const auto out = tmp / "report.json";
  const auto r = run_cli("coeffs --config " + sample("jet_endo_identity.json") + " --out " + out.string());
  ASSERT_EQ(r.code, 0);
  const json j = json::parse(read_file(out));
  // q2 = 2/(8 pi): exact 1/4 in units of 1/pi.
  EXPECT_EQ(j["densities"]["q2"]["times_pi"]["rational"]["num"], "1");
  EXPECT_EQ(j["densities"]["q2"]["times_pi"]["rational"]["den"], "4");
  EXPECT_NEAR(j["densities"]["q2"]["value"].get<double>(), 2 / (8 * kPi), 1e-16);
}

TEST(Cli, CoeffsRationalLambdaAndSymbols) {
  const auto r = run_cli("coeffs --config " + sample("jet_general.json") + " --lambda 3/2 --symbols");
  ASSERT_EQ(r.code, 0);
  const json j = json::parse(r.out);
  EXPECT_EQ(j["lambda"]["rational"]["num"], "3");
  EXPECT_EQ(j["lambda"]["rational"]["den"], "2");
  EXPECT_TRUE(j["symbols"].contains("theta_1"));
  EXPECT_TRUE(j["checks"]["pipeline_equals_closed_form"].get<bool>());
  const auto d = run_cli("coeffs --config " + sample("jet_general.json") + " --lambda 1.25e-1");
  ASSERT_EQ(d.code, 0);
  EXPECT_EQ(json::parse(d.out)["lambda"]["rational"]["den"], "8");
}

TEST(Cli, MalformedInputLeavesNoOutput) {
  TempDir tmp;
  const auto bad = tmp / "bad.json";
  write_file(bad, R"({"rank_r0": 2, "tau_N": 0, "g_n1": [[0,0],[0,0]], "g_n2": [[0,0],[0,0]], "endo_E": [[1,0],[0]]})");
  const auto out = tmp / "out.json";
  const auto r = run_cli("coeffs --config " + bad.string() + " --out " + out.string());
  EXPECT_EQ(r.code, 2);
  EXPECT_FALSE(fs::exists(out));
  EXPECT_EQ(run_cli("coeffs --config " + (tmp / "missing.json").string()).code, 2);
  EXPECT_EQ(run_cli("coeffs --config " + sample("jet_flat.json") + " --lambda abc").code, 2);
  EXPECT_EQ(run_cli("frobnicate").code, 2);
}

TEST(Cli, VerifyWritesReports) {
  TempDir tmp;
  const auto r = run_cli("verify --config " + sample("torus_flat.json") + " --out " + tmp.path().string() +
                         " --experiments polynomial,warped_crosscheck --jobs 2");
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("polynomial: PASS"), std::string::npos);
  const json rep = json::parse(read_file(tmp / "polynomial/report.json"));
  for (const char* k : {"id", "config", "targets", "fitted", "comparisons", "verdict", "audit"}) EXPECT_TRUE(rep.contains(k)) << k;
  EXPECT_EQ(rep["verdict"], "pass");
  EXPECT_FALSE(rep.contains("runtime_seconds"));
  const std::string csv = read_file(tmp / "polynomial/plot.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "lambda,lhs_minus_lndetR");
  EXPECT_TRUE(fs::exists(tmp / "warped_crosscheck/report.json"));
  EXPECT_FALSE(fs::exists(tmp / "heat_trace"));
}

TEST(Cli, VerifyIsByteReproducible) {
  TempDir a, b;
  const std::string args = "verify --config " + sample("sphere.json") + " --experiments heat_trace,kernel_limit --out ";
  ASSERT_EQ(run_cli(args + a.path().string()).code, 0);
  ASSERT_EQ(run_cli(args + b.path().string(), "BFKGLUE_JOBS=2").code, 0);
  for (const char* id : {"heat_trace", "kernel_limit"}) {
    EXPECT_EQ(read_file(a / (std::string(id) + "/report.json")), read_file(b / (std::string(id) + "/report.json")));
    EXPECT_EQ(read_file(a / (std::string(id) + "/plot.csv")), read_file(b / (std::string(id) + "/plot.csv")));
  }
}

TEST(Cli, VerifyCorruptedTargetFails) {
  TempDir tmp;
  const auto cfg = tmp / "model.json";
  write_file(cfg, R"({"cross_section": "torus", "target_offsets": {"a1": 0.001}})");
  const auto r = run_cli("verify --config " + cfg.string() + " --experiments polynomial --out " + (tmp / "out").string());
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("polynomial: FAIL [a1 "), std::string::npos) << r.out;
}

TEST(Cli, VerifyConfigErrors) {
  TempDir tmp;
  const auto cfg = tmp / "model.json";
  write_file(cfg, R"({"cross_section": "torus", "bogus": 1})");
  EXPECT_EQ(run_cli("verify --config " + cfg.string() + " --out " + (tmp / "o").string()).code, 2);
  EXPECT_FALSE(fs::exists(tmp / "o"));
  EXPECT_EQ(run_cli("verify --config " + sample("sphere.json") + " --experiments nope --out " + (tmp / "o").string()).code, 2);
  EXPECT_EQ(run_cli("verify --config " + sample("sphere.json") + " --tol -1 --out " + (tmp / "o").string()).code, 2);
  EXPECT_FALSE(fs::exists(tmp / "o"));
}

TEST(Cli, SelftestSeedZeroPasses) {
  const auto r = run_cli("selftest --seed 0 --count 4");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("omega_cancellation: PASS"), std::string::npos);
}

TEST(Cli, SelftestFaultInjectionFails) {
  TempDir tmp;
  const auto out = tmp / "selftest.json";
  const auto r = run_cli("selftest --seed 0 --count 4 --inject-fault --out " + out.string());
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("omega_cancellation: FAIL"), std::string::npos);
  const json j = json::parse(read_file(out));
  EXPECT_EQ(j["verdict"], "fail");
  ASSERT_FALSE(j["counterexamples"].empty());
  EXPECT_EQ(j["counterexamples"][0]["property"], "omega_cancellation");
  EXPECT_TRUE(j["counterexamples"][0]["inputs"].contains("jet"));
}

TEST(Cli, SelftestOutputIsReproducible) {
  TempDir tmp;
  ASSERT_EQ(run_cli("selftest --seed 5 --count 3 --jobs 1 --out " + (tmp / "a.json").string()).code, 0);
  ASSERT_EQ(run_cli("selftest --seed 5 --count 3 --jobs 3 --out " + (tmp / "b.json").string()).code, 0);
  EXPECT_EQ(read_file(tmp / "a.json"), read_file(tmp / "b.json"));
}
