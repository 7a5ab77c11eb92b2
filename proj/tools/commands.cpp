#include "commands.hpp"

#include <iomanip>
#include <ostream>
#include <sstream>

#include "anticanon/canonical.hpp"
#include "anticanon/decomposition.hpp"
#include "anticanon/errors.hpp"
#include "anticanon/oracle.hpp"

namespace anticanon::cli {

namespace {

std::string sci(double x) {
  std::ostringstream os;
  os << std::scientific << std::setprecision(2) << x;
  return os.str();
}

}  // namespace

CheckResult check_family(const OperatorFamily& fam, const TolerancePolicy& tol) {
  CheckResult r;
  // A violation outranks the degenerate regime.
  auto raise = [&r](int code) {
    r.exit_code = (r.exit_code == kViolation || code == kViolation) ? kViolation : std::max(r.exit_code, code);
  };

  const RealMatrix ac = anticommutation_residual(fam, tol);
  Eigen::Index wa = 0, wb = 0;
  r.anticommutation = fam.size() > 1 ? ac.maxCoeff(&wa, &wb) : 0.0;
  if (r.anticommutation > tol.rel_zero) {
    r.messages.push_back("not anti-commuting: " + fam.label(static_cast<int>(wa)) + ", " +
                         fam.label(static_cast<int>(wb)) + " residual " + sci(r.anticommutation));
    raise(kViolation);
  }

  for (int a = 0; a < fam.size(); ++a) {
    OperatorClass c = classify_operator(fam.op(a), tol);
    if (c.kind == OperatorKind::Unsupported) {
      r.messages.push_back(fam.label(a) + " is not diagonalizable and neither is its square");
      raise(kViolation);
    } else if (c.kind == OperatorKind::SquareDiagonalizableOnly) {
      r.messages.push_back(fam.label(a) + " is not diagonalizable but its square is (degenerate regime)");
      raise(kDegenerate);
    }
    if (c.ill_conditioned) r.messages.push_back(fam.label(a) + " has an ill-conditioned eigenbasis (" + sci(c.condition) + ")");
    r.classes.push_back(c);
  }

  r.squared_commutation = check_squared_commutes(fam, tol);
  if (r.squared_commutation > tol.rel_zero) {
    r.messages.push_back("squares do not commute: residual " + sci(r.squared_commutation));
    raise(kViolation);
  }

  if (!has_square_zero_member(fam, tol)) {
    r.linearly_independent = check_linear_independence(fam, tol);
    if (!*r.linearly_independent && r.exit_code != kViolation) {
      r.messages.push_back("members are linearly dependent although none squares to zero");
      raise(kViolation);
    }
  }
  return r;
}

TolerancePolicy base_tolerance(std::optional<double> rel_zero) {
  if (!rel_zero) return TolerancePolicy{};
  try {
    return TolerancePolicy::from_rel_zero(*rel_zero);
  } catch (const PreconditionError& e) {
    throw FormatError(std::string("--tol: ") + e.what());
  }
}

io::ReportFile run_decompose(const OperatorFamily& fam, const TolerancePolicy& base, bool canon,
                             const std::string& source) {
  const TolerancePolicy tol = fam.tolerance(base);
  io::ReportFile file;
  file.source = source;
  file.report = decompose(fam, tol);
  if (canon) file.canonical = apply_canonical(file.report, fam, tol);
  file.diagnostics.exit_code = file.report.has_degenerate() ? kDegenerate : kOk;
  if (file.report.has_degenerate())
    file.diagnostics.messages.push_back("degenerate blocks present: some operator is nonzero where its square vanishes");
  if (file.report.ill_conditioned) file.diagnostics.messages.push_back("ill-conditioned eigenbasis; residuals may be large");
  return file;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const FormatError*>(&e) || dynamic_cast<const InvalidSpec*>(&e)) return kFormatError;
  if (dynamic_cast<const Error*>(&e)) return kViolation;
  if (dynamic_cast<const std::filesystem::filesystem_error*>(&e)) return kFormatError;
  return kViolation;
}

int cmd_check(const std::filesystem::path& in, std::optional<double> rel_zero, std::ostream& out, std::ostream& err) {
  try {
    const OperatorFamily fam = io::load_family(in);
    const TolerancePolicy tol = fam.tolerance(base_tolerance(rel_zero));
    const CheckResult r = check_family(fam, tol);
    out << in.string() << ": n=" << fam.dim() << " N=" << fam.size() << " field=" << to_string(fam.field_mode())
        << "\n";
    out << "anti-commutation residual " << sci(r.anticommutation) << ", squared commutation "
        << sci(r.squared_commutation) << "\n";
    for (int a = 0; a < static_cast<int>(r.classes.size()); ++a) {
      const OperatorClass& c = r.classes[a];
      out << "  " << fam.label(a) << ": " << to_string(c.kind) << ", dim Ker " << c.kernel_dim;
      if (c.kernel_gap) out << " (Ker A^2 larger by " << c.kernel_gap << ")";
      out << "\n";
    }
    if (r.linearly_independent) out << "linearly independent: " << (*r.linearly_independent ? "yes" : "no") << "\n";
    for (const auto& m : r.messages) out << "note: " << m << "\n";
    out << "exit code " << r.exit_code << "\n";
    return r.exit_code;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
}

int cmd_decompose(const std::filesystem::path& in, const std::filesystem::path& out_path, bool canon,
                  std::optional<double> rel_zero, std::ostream& out, std::ostream& err) {
  try {
    const OperatorFamily fam = io::load_family(in);
    const TolerancePolicy base = base_tolerance(rel_zero);
    const CheckResult check = check_family(fam, fam.tolerance(base));
    if (check.exit_code == kViolation) {
      for (const auto& m : check.messages) err << "error: " << m << "\n";
      return kViolation;
    }
    io::ReportFile file = run_decompose(fam, base, canon, in.string());
    const std::string text = io::dump_report(file);
    io::write_atomic(out_path, text);
    out << io::summarize(file);
    return file.diagnostics.exit_code;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
}

std::filesystem::path expected_path(const std::filesystem::path& family_path) {
  std::filesystem::path p = family_path;
  p += ".expected.json";
  return p;
}

void reseed(io::FamilySpec& spec, std::uint64_t seed) {
  oracle::Rng rng(seed);
  for (auto& b : spec.blocks) b.seed = rng.next();
  if (!spec.scramble) spec.scramble = oracle::ScrambleSpec{};
  spec.scramble->perm_seed = rng.next();
}

int cmd_generate(const std::filesystem::path& spec_path, const std::filesystem::path& out_path,
                 std::optional<std::uint64_t> seed, std::ostream& out, std::ostream& err) {
  try {
    io::FamilySpec spec = io::load_spec(spec_path);
    if (spec.blocks.empty()) throw InvalidSpec("spec contains no blocks");
    if (seed) reseed(spec, *seed);
    oracle::BuiltFamily built = oracle::build_family(spec.blocks, spec.N, spec.mode, spec.labels);
    OperatorFamily fam = spec.scramble ? oracle::scramble(built.family, *spec.scramble) : built.family;
    io::write_atomic(out_path, io::dump_family(fam));
    io::write_atomic(expected_path(out_path), io::dump_skeleton(built.expected));
    out << "wrote " << out_path.string() << " (n=" << fam.dim() << ", N=" << fam.size() << ", "
        << built.expected.blocks.size() << " expected blocks)\n";
    return kOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFormatError;
  }
}

int cmd_compare(const std::filesystem::path& expected, const std::filesystem::path& report, std::ostream& out,
                std::ostream& err) {
  try {
    const oracle::Skeleton skel = io::parse_skeleton(io::read_text(expected));
    const io::ReportFile file = io::parse_report(io::read_text(report));
    const oracle::Comparison c = oracle::compare_reports(skel, file.report);
    if (c.match) {
      out << "match\n";
      return kOk;
    }
    out << "mismatch\n" << c.diff << "\n";
    return kViolation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
}

}  // namespace anticanon::cli
