#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "anticanon/family.hpp"
#include "anticanon/numerics.hpp"

namespace anticanon {

enum class BlockKind { Kernel, SingleOperator, Clifford, Degenerate };

std::string to_string(BlockKind kind);
BlockKind block_kind_from_string(const std::string& s);

/// Columns of P on which every squared operator takes one constant value.
struct ConstantGroup {
  std::vector<int> columns;
  std::vector<Scalar> constants;  // length N; exactly zero off the support
};

/// Counts of positive / negative real square-constants on a real block.
struct Signature {
  int p = 0;
  int q = 0;
  bool operator==(const Signature&) const = default;
};

struct Block {
  BlockKind kind = BlockKind::Kernel;
  std::vector<int> columns;  // ascending indices into DecompositionReport::P
  /// Operators acting nonzero on the block, ascending. For non-degenerate
  /// blocks this is exactly the set of operators with nonzero square-constant.
  std::vector<int> support;
  /// Square-constant of each supported operator. A SingleOperator block may
  /// merge several constant groups; this map then holds the first group's
  /// values and `groups` holds all of them.
  std::map<int, Scalar> constants;
  std::vector<ConstantGroup> groups;
  /// Restricted matrix of each supported operator, parallel to `support`.
  std::vector<Matrix> restrictions;
  double invariance_leak = 0.0;
  double constancy_residual = 0.0;
  std::optional<Signature> signature;
  std::string note;

  int dim() const { return static_cast<int>(columns.size()); }
};

/// Blocks sharing one support set (the first grouping level).
struct SupportGroup {
  std::vector<int> support;
  std::vector<int> blocks;
};

struct ResidualSummary {
  double anticommutation = 0.0;          // family, scaled
  double invariance = 0.0;               // max block leak
  double constancy = 0.0;                // max ||R_a^2 - c_a I|| / (scale^2 + 1)
  double block_anticommutation = 0.0;    // restricted pairs on Clifford blocks
  double simdiag_offdiag = 0.0;          // squared-family diagonalization
};

struct DecompositionReport {
  int n = 0;
  int N = 0;
  FieldMode field_mode = FieldMode::Complex;
  std::vector<std::string> labels;
  TolerancePolicy tolerance;
  Matrix P;
  std::vector<Block> blocks;
  std::vector<SupportGroup> support_groups;
  std::vector<OperatorClass> classes;
  ResidualSummary residuals;
  /// Real mode only: false when some square has a non-real constant, in which
  /// case no real block structure is claimed.
  bool real_structure = true;
  bool ill_conditioned = false;
  std::vector<std::string> notes;

  bool has_degenerate() const;
  /// Number of Clifford blocks with support of each size i (index i).
  std::vector<int> clifford_counts() const;
};

/// {A_a^2}, labels suffixed with "^2".
OperatorFamily square_family(const OperatorFamily& fam);

/// Invariant direct sum of an anti-commuting family.
///
/// The squares are simultaneously diagonalized; columns are grouped by the set
/// of operators with nonzero square-constant (support) and then by the full
/// constant tuple. Empty support gives the common kernel U_0, singleton
/// support {a} gives U_a (all such groups merged), and larger supports give
/// Clifford blocks, one per constant tuple. A group on which some operator is
/// nonzero while its square vanishes is Degenerate if that operator is only
/// square-diagonalizable, and InconsistentSpectrum is thrown if it was
/// classified diagonalizable.
///
/// Throws PreconditionError when the family does not anti-commute or has an
/// Unsupported member; simdiag errors pass through.
DecompositionReport decompose(const OperatorFamily& fam, const TolerancePolicy& tol);

/// Max over blocks and all operators of the invariance leak of the block span.
double verify_block_invariance(const DecompositionReport& rep, const OperatorFamily& fam,
                               const TolerancePolicy& tol);

/// Columns of `P` listed in `columns`.
Matrix block_basis(const Matrix& P, const std::vector<int>& columns);

}  // namespace anticanon
