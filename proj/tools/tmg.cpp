// tmg <command> --config <file> [--format json|text] [--out <file>]

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "tmg/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Galois group dimensions of Carlitz logarithm t-motives"};
  app.require_subcommand(1, 1);
  std::string config_path, format = "json", out_path;
  bool timing = false;
  for (const auto& name : tmg::known_commands()) {
    auto* sub = app.add_subcommand(name);
    auto* cfg = sub->add_option("--config", config_path, "JSON configuration file")->check(CLI::ExistingFile);
    if (name != "selftest") cfg->required();
    sub->add_option("--format", format, "report format")->check(CLI::IsMember({"json", "text"}));
    sub->add_option("--out", out_path, "write the report here instead of stdout");
    sub->add_flag("--timing", timing, "include wall-clock time in the report");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : tmg::kExitInput;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  std::string text = "{\"field\": {\"p\": 2}}";
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  const tmg::RunReport report = tmg::run_from_text(command, text, {timing});
  const std::string bytes = tmg::emit_report(report, format);
  if (out_path.empty()) {
    std::cout << bytes;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
      std::cerr << "cannot write " << out_path << "\n";
      return tmg::kExitInput;
    }
    out << bytes;
  }
  return report.exit_code;
}
