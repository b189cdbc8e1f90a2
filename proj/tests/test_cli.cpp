#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "generators.hpp"
#include "tmg/cli.hpp"

namespace tmg {
namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string config(const std::string& name) { return read_file(std::string(TMG_CONFIG_DIR) + "/" + name); }

struct ToolRun {
  int exit_code = -1;
  std::string out;
};

ToolRun run_tool(const std::string& args, const std::string& env = "") {
  ToolRun r;
  const std::string cmd = env + " " + TMG_TOOL_PATH + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

TEST(ParseConfig, ThetaOverF2) {
  const ConfigParse p = parse_config(R"({"field":{"p":2,"e":1},"alphas":[[[0],[1]]]})", "galois");
  ASSERT_TRUE(p.config.has_value()) << (p.violations.empty() ? "" : p.violations.front());
  EXPECT_EQ(p.config->field->q(), 2u);
  ASSERT_EQ(p.config->alphas.size(), 1u);
  EXPECT_EQ(p.config->alphas[0], RatTheta::theta(p.config->field));
  EXPECT_EQ(p.config->bounds.mu_degree, p.config->bounds.t_degree);
}

TEST(ParseConfig, NonPrimeCharacteristicRejected) {
  const ConfigParse p = parse_config(R"({"field":{"p":4},"alphas":[[[1]]]})", "galois");
  EXPECT_FALSE(p.config.has_value());
  bool found = false;
  for (const auto& v : p.violations) found = found || v.find("p must be prime") != std::string::npos;
  EXPECT_TRUE(found);
}

TEST(ParseConfig, MissingAlphasRejectedForGalois) {
  EXPECT_FALSE(parse_config(R"({"field":{"p":3}})", "galois").config.has_value());
  EXPECT_TRUE(parse_config(R"({"field":{"p":3}})", "period").config.has_value());
}

TEST(ParseConfig, EveryViolationIsReported) {
  const ConfigParse p = parse_config(config("invalid.json"), "galois");
  EXPECT_FALSE(p.config.has_value());
  EXPECT_GE(p.violations.size(), 3u);
  EXPECT_THROW(parse_config_or_throw(config("invalid.json"), "galois"), ConfigError);
}

TEST(ParseConfig, OtherRejections) {
  EXPECT_FALSE(parse_config("not json", "galois").config.has_value());
  EXPECT_FALSE(parse_config(R"({"field":{"p":2},"alphas":[[[0]]]})", "galois").config.has_value());
  EXPECT_FALSE(parse_config(R"({"field":{"p":2,"e":2,"modulus":[1,0,1]},"alphas":[[[1]]]})", "galois").config.has_value());
  EXPECT_FALSE(parse_config(R"({"field":{"p":2},"alphas":[[[1]]]})", "act").config.has_value());
}

TEST(ParseConfigProperty, RoundTripThroughJson) {
  for (const auto& name : {"act_q2.json", "exp_q3.json", "field_q4.json", "galois_q2_one.json", "galois_q2_theta.json",
                           "galois_q3_pair.json", "galois_q3_theta.json", "log_q2.json", "period_q3.json",
                           "trivialization_q2.json"}) {
    const RunConfig c = parse_config_or_throw(config(name));
    EXPECT_EQ(parse_config_or_throw(to_json(c).dump()), c) << name;
  }
  for (auto q : {2u, 3u, 4u, 9u}) {
    const auto F = testing::field_q(q);
    for (int i = 0; i < 25; ++i) {
      RunConfig c;
      c.field_spec = {F->p(), F->e(), {}};
      c.field = F;
      for (int k = 0; k < 1 + i % 3; ++k) c.alphas.push_back(testing::nonzero_rat(F, 3));
      c.bounds = SolverBounds{unsigned(i % 4), unsigned(i % 5), unsigned(i % 3), std::nullopt};
      if (i % 2) c.bounds.escalation = Escalation{3, unsigned(i % 4)};
      c.precision.v_terms = 20 + i;
      c.options.scan_rows = i % 3 ? std::optional<long long>(100 + i) : std::nullopt;
      c.options.numeric_checks = i % 2 == 0;
      const RunConfig back = parse_config_or_throw(to_json(c).dump());
      EXPECT_EQ(back, c);
    }
  }
}

TEST(RunCommand, ExitCodes) {
  EXPECT_EQ(run_from_text("galois", config("galois_q3_pair.json")).exit_code, kExitOk);
  EXPECT_EQ(run_from_text("galois", config("invalid.json")).exit_code, kExitInput);
  EXPECT_EQ(run_from_text("galois", config("galois_q3_theta.json")).exit_code, kExitExhausted);
  EXPECT_EQ(run_from_text("check-trivialization", config("trivialization_q2.json")).exit_code, kExitOk);
  EXPECT_EQ(run_from_text("bogus", config("period_q3.json")).exit_code, kExitInput);
  // Precision exhaustion is exit 2, never 3.
  EXPECT_EQ(run_from_text("period", R"({"field":{"p":2},"precision":{"v_terms":500,"product_terms":2}})").exit_code,
            kExitExhausted);
  EXPECT_EQ(exit_code_for(ErrorKind::internal), kExitInternal);
}

TEST(RunCommand, GaloisPairReport) {
  const RunReport r = run_from_text("galois", config("galois_q3_pair.json"));
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.result["dim_G"], 2);
  EXPECT_EQ(r.result["n"], 1);
  EXPECT_EQ(r.result["status"], "dependent-proven");
  EXPECT_TRUE(r.errors.empty());
}

TEST(RunCommand, TrivializationReport) {
  const RunReport r = run_from_text("check-trivialization", R"({"field":{"p":2},"alphas":[[[0],[1]]]})");
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.result["pass"], true);
}

TEST(RunCommand, SmallBoundsGiveBoundedVerdict) {
  const RunReport r =
      run_from_text("galois", R"({"field":{"p":3},"alphas":[[[0],[1]]],"bounds":{"B_t":2,"B_theta":2},"options":{"scan":false}})");
  EXPECT_EQ(r.exit_code, kExitExhausted);
  EXPECT_EQ(r.result["status"], "independent-up-to-bounds");
  EXPECT_EQ(r.result["dim_G"], 2);
}

TEST(EmitReport, DeterministicBytes) {
  for (const auto& [cmd, name] : std::vector<std::pair<std::string, std::string>>{
           {"galois", "galois_q2_one.json"}, {"period", "period_q3.json"}, {"log", "log_q2.json"}}) {
    const std::string a = emit_report(run_from_text(cmd, config(name)), "json");
    const std::string b = emit_report(run_from_text(cmd, config(name)), "json");
    EXPECT_EQ(a, b) << name;
    EXPECT_EQ(a.find("timing"), std::string::npos);
    EXPECT_EQ(a.back(), '\n');
    EXPECT_EQ(Json::parse(a).dump(2) + "\n", a);
  }
  const RunReport timed = run_from_text("period", config("period_q3.json"), {true});
  EXPECT_NE(emit_report(timed, "json").find("\"timing\""), std::string::npos);
}

TEST(EmitReport, TextSummaryLine) {
  const std::string text = emit_report(run_from_text("galois", config("galois_q3_pair.json")), "text");
  EXPECT_NE(text.find("dim G = n+1 = 2 (r = 2)"), std::string::npos) << text;
  const std::string single = emit_report(
      run_from_text("galois", R"({"field":{"p":3},"alphas":[[[0],[1]]],"bounds":{"B_t":2,"B_theta":2},"options":{"scan":false}})"),
      "text");
  EXPECT_NE(single.find("dim G = n+1 = 2 (r = 1)"), std::string::npos) << single;
  EXPECT_NE(single.find("exit code 2"), std::string::npos);
}

TEST(EmitReport, SelftestListsSuites) {
  const RunReport r = run_from_text("selftest", R"({"field":{"p":2}})");
  EXPECT_EQ(r.exit_code, 0);
  ASSERT_TRUE(r.result["suites"].is_array());
  EXPECT_GE(r.result["suites"].size(), 6u);
  for (const auto& s : r.result["suites"]) {
    EXPECT_TRUE(s.contains("name"));
    EXPECT_EQ(s["pass"], true) << s["name"];
  }
  EXPECT_NE(r.summary.find("PASS omega-identity"), std::string::npos);
}

TEST(Tool, WritesReportFile) {
  const std::string out = (std::filesystem::temp_directory_path() / "tmg_cli_test_report.json").string();
  std::filesystem::remove(out);
  const ToolRun r = run_tool("galois --config " + std::string(TMG_CONFIG_DIR) + "/galois_q2_theta.json --out " + out);
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_TRUE(r.out.empty());
  const Json j = Json::parse(read_file(out));
  EXPECT_EQ(j["result"]["dim_G"], 1);
  EXPECT_EQ(read_file(out), emit_report(run_from_text("galois", config("galois_q2_theta.json")), "json"));
  std::filesystem::remove(out);
}

TEST(Tool, ExitCodesAndFormats) {
  const std::string dir = TMG_CONFIG_DIR;
  EXPECT_EQ(run_tool("galois --config " + dir + "/invalid.json").exit_code, 1);
  EXPECT_EQ(run_tool("galois --config " + dir + "/galois_q3_theta.json --format text").exit_code, 2);
  EXPECT_EQ(run_tool("galois").exit_code, 1);
  EXPECT_EQ(run_tool("galois --config " + dir + "/missing.json").exit_code, 1);
  const ToolRun text = run_tool("galois --config " + dir + "/galois_q3_pair.json --format text");
  EXPECT_EQ(text.exit_code, 0);
  EXPECT_NE(text.out.find("dim G = n+1 = 2"), std::string::npos);
}

TEST(Tool, WorkerCountDoesNotChangeBytes) {
  const std::string args = "galois --config " + std::string(TMG_CONFIG_DIR) + "/galois_q3_pair.json";
  const ToolRun one = run_tool(args, "TMG_WORKERS=1");
  const ToolRun four = run_tool(args, "TMG_WORKERS=4");
  EXPECT_EQ(one.exit_code, 0);
  EXPECT_EQ(one.out, four.out);
}

}  // namespace
}  // namespace tmg
