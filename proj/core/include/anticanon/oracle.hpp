#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "anticanon/decomposition.hpp"
#include "anticanon/family.hpp"
#include "anticanon/numerics.hpp"

namespace anticanon::oracle {

/// One summand of a family with known structure.
///
/// Kernel: all operators vanish. SingleOperator: support {a}, operator a is
/// sqrt(c) times a random +-1 diagonal. Clifford: support of size m >= 2,
/// operator a is sqrt(c_a) times a Pauli-tensor gamma matrix; dim must be a
/// multiple of 2^floor(m/2) (twice that in real mode). Degenerate: each
/// supported operator is a direct sum of 2x2 nilpotent Jordan blocks (dim even).
struct BlockSpec {
  BlockKind kind = BlockKind::Kernel;
  int dim = 1;
  std::vector<int> support;
  std::map<int, Scalar> constants;
  std::uint64_t seed = 0;
  /// Optional explicit 0-based global basis positions; either every spec of a
  /// family sets them (forming a permutation of 0..n-1) or none does.
  std::vector<int> positions;
};

struct ScrambleSpec {
  double conj_cond_max = 50.0;
  std::uint64_t perm_seed = 0;
  double noise = 0.0;
  /// Householder reflections on each side of the diagonal scaling; -1 means n.
  int reflections = -1;
};

/// Expected structure of one block, as the decomposition should report it.
struct ExpectedBlock {
  BlockKind kind = BlockKind::Kernel;
  std::vector<int> support;
  std::vector<Scalar> constants;  // parallel to support (empty for Kernel / SingleOperator / Degenerate)
  int dim = 0;
};

struct Skeleton {
  int n = 0;
  int N = 0;
  std::vector<ExpectedBlock> blocks;
};

struct BuiltFamily {
  OperatorFamily family;
  Skeleton expected;
};

/// Minimum Clifford block dimension unit for m generators.
int clifford_dim_unit(int generators, FieldMode mode);

/// Pauli-tensor gamma matrices: m pairwise anti-commuting Hermitian matrices
/// of size 2^floor(m/2), each squaring to I.
std::vector<Matrix> gamma_matrices(int m);

/// Block-diagonal family from specs (in order, or at `positions`).
/// Throws InvalidSpec on inconsistent input.
BuiltFamily build_family(const std::vector<BlockSpec>& specs, int N, FieldMode mode,
                         std::vector<std::string> labels = {});

/// Deterministic random invertible conjugator with condition exactly
/// conj_cond_max (product of reflections, a diagonal scaling, reflections).
Matrix random_conjugator(int n, const ScrambleSpec& s, FieldMode mode);

/// S^-1 A_a S for every member.
OperatorFamily conjugate(const OperatorFamily& fam, const Matrix& S);

/// Permute the basis by perm_seed, conjugate by random_conjugator, add
/// entrywise noise last.
OperatorFamily scramble(const OperatorFamily& fam, const ScrambleSpec& s);

struct Comparison {
  bool match = false;
  std::string diff;
};

/// Multiset comparison of (kind, support, constants, dim). Kernel and
/// SingleOperator blocks compare by total dimension per operator index;
/// Degenerate blocks by (support, dim). Constants match within
/// rel_tol * max(1, |c|).
Comparison compare_reports(const Skeleton& expected, const DecompositionReport& actual, double rel_tol = 1e-6);

/// Skeleton of an actual report (for diffing two reports or serializing).
Skeleton skeleton_of(const DecompositionReport& rep);

Comparison compare_skeletons(const Skeleton& expected, const Skeleton& actual, double rel_tol = 1e-6);

struct CorpusCase {
  std::string name;
  int N = 1;
  FieldMode mode = FieldMode::Complex;
  std::vector<BlockSpec> specs;
  ScrambleSpec scramble;
};

/// Randomized corpus; guarantees coverage of an empty kernel, several
/// same-support Clifford blocks with different constants, an odd-dimensional
/// SingleOperator block, an N = 1 family and a nilpotent (Degenerate) summand.
std::vector<CorpusCase> sample_corpus(int count, std::uint64_t seed, int max_dim = 32, int max_N = 5);

/// The N = 5, n = 20 example: kernel 1; U(A4) dim 2; U(A2) dim 1;
/// {A3,A5} dim 2; {A2,A4} dim 6; {A1,A3,A5} dim 2 twice with different
/// constants; {A1,A3,A4,A5} dim 4. Basis positions follow the example's
/// X_1..X_20 numbering (0-based).
std::vector<BlockSpec> worked_example_specs();

/// Deterministic 64-bit generator; identical streams on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  std::uint64_t next();
  double uniform();                   // [0, 1)
  double uniform(double lo, double hi);
  int integer(int lo, int hi);        // inclusive
  double normal();

 private:
  std::uint64_t state_;
};

}  // namespace anticanon::oracle
