#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "anticanon/canonical.hpp"
#include "anticanon/decomposition.hpp"
#include "anticanon/family.hpp"
#include "anticanon/oracle.hpp"

namespace anticanon::io {

inline constexpr const char* kFamilyFormat = "anticanon/1";
inline constexpr const char* kReportFormat = "anticanon-report/1";
inline constexpr const char* kSpecFormat = "anticanon-spec/1";
inline constexpr const char* kSkeletonFormat = "anticanon-skeleton/1";

// All parse_* functions throw FormatError with a "line N" or field-path
// diagnostic; load_* additionally report unreadable files the same way.

OperatorFamily parse_family(const std::string& text);
OperatorFamily load_family(const std::filesystem::path& path);
std::string dump_family(const OperatorFamily& fam);

/// Input of `generate`: block specs plus an optional scramble.
struct FamilySpec {
  int N = 1;
  FieldMode mode = FieldMode::Complex;
  std::vector<std::string> labels;
  std::vector<oracle::BlockSpec> blocks;
  std::optional<oracle::ScrambleSpec> scramble;
};

FamilySpec parse_spec(const std::string& text);
FamilySpec load_spec(const std::filesystem::path& path);
std::string dump_spec(const FamilySpec& spec);

oracle::Skeleton parse_skeleton(const std::string& text);
std::string dump_skeleton(const oracle::Skeleton& skel);

struct Diagnostics {
  int exit_code = 0;
  std::vector<std::string> messages;
};

/// Everything `decompose` writes: the machine report and the human summary
/// are both rendered from this one value.
struct ReportFile {
  std::string source;
  DecompositionReport report;
  std::optional<CanonicalResult> canonical;
  Diagnostics diagnostics;
};

std::string dump_report(const ReportFile& r);
ReportFile parse_report(const std::string& text);
std::string summarize(const ReportFile& r);

std::string read_text(const std::filesystem::path& path);

/// Write to a sibling temporary file, then rename over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace anticanon::io
