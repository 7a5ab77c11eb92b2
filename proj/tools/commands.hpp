#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "anticanon/family.hpp"
#include "anticanon/io.hpp"
#include "anticanon/numerics.hpp"

namespace anticanon::cli {

enum ExitCode : int {
  kOk = 0,
  kViolation = 1,
  kDegenerate = 2,
  kFormatError = 3,
};

/// Hypothesis checks shared by `check` and `decompose`.
struct CheckResult {
  int exit_code = kOk;
  std::vector<std::string> messages;
  std::vector<OperatorClass> classes;
  double anticommutation = 0.0;
  double squared_commutation = 0.0;
  std::optional<bool> linearly_independent;  // unset when a member squares to zero
};

CheckResult check_family(const OperatorFamily& fam, const TolerancePolicy& tol);

/// Tolerance for --tol; nullopt keeps the defaults.
TolerancePolicy base_tolerance(std::optional<double> rel_zero);

/// Runs decompose (and apply_canonical) and collects diagnostics. Throws the
/// library errors unchanged.
io::ReportFile run_decompose(const OperatorFamily& fam, const TolerancePolicy& base, bool canon,
                             const std::string& source = {});

/// Map an exception thrown by the library or the I/O layer to an exit code.
int exit_code_for(const std::exception& e);

int cmd_check(const std::filesystem::path& in, std::optional<double> rel_zero, std::ostream& out, std::ostream& err);

int cmd_decompose(const std::filesystem::path& in, const std::filesystem::path& out_path, bool canon,
                  std::optional<double> rel_zero, std::ostream& out, std::ostream& err);

/// Writes the family to `out_path` and the expected skeleton next to it
/// (see expected_path).
int cmd_generate(const std::filesystem::path& spec, const std::filesystem::path& out_path,
                 std::optional<std::uint64_t> seed, std::ostream& out, std::ostream& err);

/// Compare an expected skeleton with a report written by `decompose`.
int cmd_compare(const std::filesystem::path& expected, const std::filesystem::path& report, std::ostream& out,
                std::ostream& err);

std::filesystem::path expected_path(const std::filesystem::path& family_path);

/// --seed S: reseed every block and the scramble deterministically from S.
void reseed(io::FamilySpec& spec, std::uint64_t seed);

}  // namespace anticanon::cli
