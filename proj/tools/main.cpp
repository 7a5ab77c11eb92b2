#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Decompose families of anti-commuting operators into invariant blocks"};
  app.require_subcommand(1);

  std::string input;
  std::string output;
  std::string spec;
  std::string expected;
  std::string report;
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  bool canon = false;

  auto* check = app.add_subcommand("check", "Verify the hypotheses on a family file");
  check->add_option("input", input, "Family file")->required();
  check->add_option("--tol", tol, "Relative zero threshold");

  auto* decompose = app.add_subcommand("decompose", "Decompose a family and write a report");
  decompose->add_option("input", input, "Family file")->required();
  decompose->add_option("-o,--output", output, "Report file")->required();
  decompose->add_flag("--canon", canon, "Also build canonical forms");
  decompose->add_option("--tol", tol, "Relative zero threshold");

  auto* generate = app.add_subcommand("generate", "Build a family with known structure from a spec");
  generate->add_option("spec", spec, "Spec file")->required();
  generate->add_option("-o,--output", output, "Family file")->required();
  generate->add_option("--seed", seed, "Reseed all blocks and the scramble");

  auto* compare = app.add_subcommand("compare", "Compare an expected skeleton with a report");
  compare->add_option("expected", expected, "Expected skeleton file")->required();
  compare->add_option("report", report, "Report file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : anticanon::cli::kFormatError;
  }

  using namespace anticanon::cli;
  if (check->parsed()) return cmd_check(input, tol, std::cout, std::cerr);
  if (decompose->parsed()) return cmd_decompose(input, output, canon, tol, std::cout, std::cerr);
  if (generate->parsed()) return cmd_generate(spec, output, seed, std::cout, std::cerr);
  if (compare->parsed()) return cmd_compare(expected, report, std::cout, std::cerr);
  return kFormatError;
}
