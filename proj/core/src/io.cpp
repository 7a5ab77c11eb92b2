#include "anticanon/io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <unistd.h>

#include <json.hpp>

#include "anticanon/errors.hpp"

namespace anticanon::io {

namespace {

using json = nlohmann::ordered_json;

// ---- generic helpers -------------------------------------------------------

json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    std::size_t column = 1;
    const std::size_t end = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw FormatError("line " + std::to_string(line) + ", column " + std::to_string(column) + ": malformed JSON");
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed JSON: ") + e.what());
  }
}

[[noreturn]] void fail(const std::string& path, const std::string& what) { throw FormatError(path + ": " + what); }

const json& field(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) fail(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(path, "missing field '" + key + "'");
  return *it;
}

bool has(const json& obj, const std::string& key) { return obj.is_object() && obj.contains(key); }

std::string get_string(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

long long get_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<long long>();
}

std::uint64_t get_uint(const json& j, const std::string& path) {
  if (!j.is_number_integer() || (j.is_number_integer() && !j.is_number_unsigned() && j.get<long long>() < 0)) {
    fail(path, "expected a non-negative integer");
  }
  return j.get<std::uint64_t>();
}

bool get_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) fail(path, "expected true or false");
  return j.get<bool>();
}

json real_value(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

double get_real(const json& j, const std::string& path) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  fail(path, "expected a number");
}

double get_finite(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a finite number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) fail(path, "expected a finite number");
  return x;
}

json scalar_json(const Scalar& s) { return json::array({s.real(), s.imag()}); }

Scalar get_scalar(const json& j, const std::string& path, bool allow_plain) {
  if (j.is_number()) {
    if (!allow_plain) fail(path, "expected a two-element [re, im] pair");
    return {get_finite(j, path), 0.0};
  }
  if (!j.is_array() || j.size() != 2) fail(path, "expected a two-element [re, im] pair");
  return {get_finite(j[0], path + "[0]"), get_finite(j[1], path + "[1]")};
}

json matrix_json(const Matrix& m, bool real) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(real ? json(m(i, k).real()) : scalar_json(m(i, k)));
    rows.push_back(std::move(row));
  }
  return rows;
}

// rows/cols < 0: take from the data.
Matrix get_matrix(const json& j, const std::string& path, bool real_mode, long rows = -1, long cols = -1) {
  if (!j.is_array()) fail(path, "expected an array of rows");
  if (rows >= 0 && static_cast<long>(j.size()) != rows) {
    fail(path, "expected " + std::to_string(rows) + " rows, found " + std::to_string(j.size()));
  }
  const long r = static_cast<long>(j.size());
  long c = cols;
  if (c < 0) c = r == 0 ? 0 : static_cast<long>(j[0].is_array() ? j[0].size() : 0);
  Matrix m(r, c);
  for (long i = 0; i < r; ++i) {
    const std::string rp = path + "[" + std::to_string(i) + "]";
    const json& row = j[i];
    if (!row.is_array()) fail(rp, "expected a row array");
    if (static_cast<long>(row.size()) != c) {
      fail(rp, "expected " + std::to_string(c) + " entries, found " + std::to_string(row.size()));
    }
    for (long k = 0; k < c; ++k) {
      const std::string ep = rp + "[" + std::to_string(k) + "]";
      if (real_mode) {
        if (!row[k].is_number()) fail(ep, "expected a real number (field_mode is real)");
        m(i, k) = Scalar(get_finite(row[k], ep), 0.0);
      } else {
        m(i, k) = get_scalar(row[k], ep, true);
      }
    }
  }
  return m;
}

bool is_primitive(const json& j) { return !j.is_array() && !j.is_object(); }

bool is_flat(const json& j) {
  if (is_primitive(j)) return true;
  if (!j.is_array()) return false;
  for (const auto& e : j)
    if (!is_primitive(e) && !(e.is_array() && std::all_of(e.begin(), e.end(), is_primitive))) return false;
  return true;
}

// Indented JSON with numeric rows kept on one line.
void pretty(const json& j, int indent, std::ostringstream& os) {
  const std::string pad(indent + 2, ' ');
  if (j.is_object()) {
    if (j.empty()) {
      os << "{}";
      return;
    }
    os << "{\n";
    bool first = true;
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (!first) os << ",\n";
      first = false;
      os << pad << json(it.key()).dump() << ": ";
      pretty(it.value(), indent + 2, os);
    }
    os << "\n" << std::string(indent, ' ') << "}";
  } else if (j.is_array()) {
    if (j.empty() || is_flat(j)) {
      os << j.dump();
      return;
    }
    os << "[\n";
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (i) os << ",\n";
      os << pad;
      if (is_flat(j[i])) {
        os << j[i].dump();
      } else {
        pretty(j[i], indent + 2, os);
      }
    }
    os << "\n" << std::string(indent, ' ') << "]";
  } else {
    os << j.dump();
  }
}

std::string render(const json& j) {
  std::ostringstream os;
  pretty(j, 0, os);
  os << "\n";
  return os.str();
}

void check_format(const json& j, const char* expected) {
  const std::string got = get_string(field(j, "format", "$"), "$.format");
  if (got != expected) fail("$.format", "unrecognized format '" + got + "' (expected " + expected + ")");
}

int label_index(const std::vector<std::string>& labels, const std::string& name, const std::string& path) {
  for (std::size_t a = 0; a < labels.size(); ++a)
    if (labels[a] == name) return static_cast<int>(a);
  fail(path, "unknown operator '" + name + "'");
}

std::vector<int> get_int_list(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of integers");
  std::vector<int> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(static_cast<int>(get_int(j[i], path + "[" + std::to_string(i) + "]")));
  return out;
}

std::vector<Scalar> get_scalar_list(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array");
  std::vector<Scalar> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(get_scalar(j[i], path + "[" + std::to_string(i) + "]", true));
  return out;
}

json scalar_list_json(const std::vector<Scalar>& v) {
  json out = json::array();
  for (const auto& s : v) out.push_back(scalar_json(s));
  return out;
}

// ---- canonical forms -------------------------------------------------------

json form_json(const BlockForm& f, const DecompositionReport& rep) {
  json j;
  j["block"] = f.block;
  j["note"] = f.note;
  j["residual"] = real_value(f.residual);
  if (f.skipped) {
    j["type"] = "skipped";
  } else if (std::holds_alternative<std::monostate>(f.form)) {
    j["type"] = "none";
  } else if (const auto* s = std::get_if<SingleOperatorForm>(&f.form)) {
    j["type"] = "single";
    j["values"] = scalar_list_json(s->values);
    j["opposite_pairs"] = s->opposite_pairs;
    j["form_residual"] = real_value(s->residual);
    j["local_basis"] = matrix_json(s->local_basis, false);
  } else if (const auto* c = std::get_if<CliffordCanonicalForm>(&f.form)) {
    j["type"] = "clifford";
    const Block& b = rep.blocks.at(f.block);
    json ops = json::array();
    for (int a : b.support) ops.push_back(rep.labels.at(a));
    j["operators"] = ops;
    j["normalizers"] = scalar_list_json(c->normalizers);
    j["depth"] = c->depth;
    json trace = json::array();
    for (const auto& st : c->recursion_trace)
      trace.push_back({{"depth", st.depth}, {"dim", st.dim}, {"generators", st.generators}, {"plus_dim", st.plus_dim}});
    j["recursion_trace"] = trace;
    j["form_residual"] = real_value(c->residual);
    json gens = json::array();
    for (const auto& g : c->generators) gens.push_back(matrix_json(g, false));
    j["generators"] = gens;
    j["local_basis"] = matrix_json(c->local_basis, false);
  } else if (const auto* p = std::get_if<PairCanonicalForm>(&f.form)) {
    j["type"] = "pair";
    j["lambda"] = scalar_json(p->lambda);
    j["D"] = scalar_list_json(p->D);
    j["form_residual"] = real_value(p->residual);
    j["canon_A"] = matrix_json(p->canon_A, false);
    j["canon_B"] = matrix_json(p->canon_B, false);
    j["canon_B2"] = matrix_json(p->canon_B2, false);
    j["local_basis"] = matrix_json(p->local_basis, false);
  }
  return j;
}

BlockForm form_from_json(const json& j, const std::string& path) {
  BlockForm f;
  f.block = static_cast<int>(get_int(field(j, "block", path), path + ".block"));
  f.note = get_string(field(j, "note", path), path + ".note");
  f.residual = get_real(field(j, "residual", path), path + ".residual");
  const std::string type = get_string(field(j, "type", path), path + ".type");
  auto mat = [&](const char* key) { return get_matrix(field(j, key, path), path + "." + key, false); };
  if (type == "skipped") {
    f.skipped = true;
  } else if (type == "none") {
  } else if (type == "single") {
    SingleOperatorForm s;
    s.values = get_scalar_list(field(j, "values", path), path + ".values");
    s.opposite_pairs = get_bool(field(j, "opposite_pairs", path), path + ".opposite_pairs");
    s.residual = get_real(field(j, "form_residual", path), path + ".form_residual");
    s.local_basis = mat("local_basis");
    f.form = std::move(s);
  } else if (type == "clifford") {
    CliffordCanonicalForm c;
    c.normalizers = get_scalar_list(field(j, "normalizers", path), path + ".normalizers");
    c.depth = static_cast<int>(get_int(field(j, "depth", path), path + ".depth"));
    const json& trace = field(j, "recursion_trace", path);
    for (std::size_t i = 0; i < trace.size(); ++i) {
      const std::string tp = path + ".recursion_trace[" + std::to_string(i) + "]";
      RecursionStep st;
      st.depth = static_cast<int>(get_int(field(trace[i], "depth", tp), tp));
      st.dim = static_cast<int>(get_int(field(trace[i], "dim", tp), tp));
      st.generators = static_cast<int>(get_int(field(trace[i], "generators", tp), tp));
      st.plus_dim = static_cast<int>(get_int(field(trace[i], "plus_dim", tp), tp));
      c.recursion_trace.push_back(st);
    }
    c.residual = get_real(field(j, "form_residual", path), path + ".form_residual");
    const json& gens = field(j, "generators", path);
    for (std::size_t i = 0; i < gens.size(); ++i)
      c.generators.push_back(get_matrix(gens[i], path + ".generators[" + std::to_string(i) + "]", false));
    c.local_basis = mat("local_basis");
    f.form = std::move(c);
  } else if (type == "pair") {
    PairCanonicalForm p;
    p.lambda = get_scalar(field(j, "lambda", path), path + ".lambda", true);
    p.D = get_scalar_list(field(j, "D", path), path + ".D");
    p.residual = get_real(field(j, "form_residual", path), path + ".form_residual");
    p.canon_A = mat("canon_A");
    p.canon_B = mat("canon_B");
    p.canon_B2 = mat("canon_B2");
    p.local_basis = mat("local_basis");
    f.form = std::move(p);
  } else {
    fail(path + ".type", "unknown form type '" + type + "'");
  }
  return f;
}

OperatorKind operator_kind_from_string(const std::string& s, const std::string& path) {
  if (s == "diagonalizable") return OperatorKind::Diagonalizable;
  if (s == "square-diagonalizable-only") return OperatorKind::SquareDiagonalizableOnly;
  if (s == "unsupported") return OperatorKind::Unsupported;
  fail(path, "unknown operator class '" + s + "'");
}

BlockKind kind_from(const json& j, const std::string& path) {
  const std::string s = get_string(j, path);
  try {
    return block_kind_from_string(s);
  } catch (const PreconditionError&) {
    fail(path, "unknown block kind '" + s + "'");
  }
}

}  // namespace

// ---- family files ------------------------------------------------------------

OperatorFamily parse_family(const std::string& text) {
  const json j = parse_text(text);
  if (!j.is_object()) fail("$", "expected an object");
  check_format(j, kFamilyFormat);
  FieldMode mode;
  try {
    mode = field_mode_from_string(get_string(field(j, "field_mode", "$"), "$.field_mode"));
  } catch (const PreconditionError& e) {
    fail("$.field_mode", e.what());
  }
  const long long n = get_int(field(j, "n", "$"), "$.n");
  if (n <= 0) fail("$.n", "dimension must be positive");
  const json& ops = field(j, "operators", "$");
  if (!ops.is_array() || ops.empty()) fail("$.operators", "expected a non-empty array");

  std::vector<Matrix> mats;
  std::vector<std::string> names;
  for (std::size_t a = 0; a < ops.size(); ++a) {
    const std::string p = "$.operators[" + std::to_string(a) + "]";
    names.push_back(get_string(field(ops[a], "name", p), p + ".name"));
    mats.push_back(get_matrix(field(ops[a], "matrix", p), p + ".matrix", mode == FieldMode::Real, static_cast<long>(n),
                              static_cast<long>(n)));
  }
  try {
    return OperatorFamily::make(std::move(mats), std::move(names), mode);
  } catch (const PreconditionError& e) {
    fail("$.operators", e.what());
  }
}

OperatorFamily load_family(const std::filesystem::path& path) { return parse_family(read_text(path)); }

std::string dump_family(const OperatorFamily& fam) {
  json j;
  j["format"] = kFamilyFormat;
  j["field_mode"] = to_string(fam.field_mode());
  j["n"] = fam.dim();
  json ops = json::array();
  for (int a = 0; a < fam.size(); ++a) {
    ops.push_back({{"name", fam.label(a)}, {"matrix", matrix_json(fam.op(a), fam.field_mode() == FieldMode::Real)}});
  }
  j["operators"] = ops;
  return render(j);
}

// ---- spec files --------------------------------------------------------------

FamilySpec parse_spec(const std::string& text) {
  const json j = parse_text(text);
  if (!j.is_object()) fail("$", "expected an object");
  check_format(j, kSpecFormat);
  FamilySpec spec;
  spec.N = static_cast<int>(get_int(field(j, "N", "$"), "$.N"));
  if (spec.N < 1) fail("$.N", "family size must be positive");
  if (has(j, "field_mode")) {
    try {
      spec.mode = field_mode_from_string(get_string(j["field_mode"], "$.field_mode"));
    } catch (const PreconditionError& e) {
      fail("$.field_mode", e.what());
    }
  }
  if (has(j, "labels")) {
    const json& l = j["labels"];
    if (!l.is_array()) fail("$.labels", "expected an array of strings");
    for (std::size_t i = 0; i < l.size(); ++i) spec.labels.push_back(get_string(l[i], "$.labels[" + std::to_string(i) + "]"));
  }
  const json& blocks = field(j, "blocks", "$");
  if (!blocks.is_array()) fail("$.blocks", "expected an array");
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const std::string p = "$.blocks[" + std::to_string(i) + "]";
    const json& b = blocks[i];
    oracle::BlockSpec s;
    s.kind = kind_from(field(b, "kind", p), p + ".kind");
    const long long dim = get_int(field(b, "dim", p), p + ".dim");
    if (dim < 1) fail(p + ".dim", "dimension must be positive");
    s.dim = static_cast<int>(dim);
    if (has(b, "support")) s.support = get_int_list(b["support"], p + ".support");
    if (has(b, "constants")) {
      const auto c = get_scalar_list(b["constants"], p + ".constants");
      if (c.size() != s.support.size()) fail(p + ".constants", "expected one constant per support index");
      for (std::size_t k = 0; k < c.size(); ++k) s.constants[s.support[k]] = c[k];
    }
    s.seed = has(b, "seed") ? get_uint(b["seed"], p + ".seed") : static_cast<std::uint64_t>(i + 1);
    if (has(b, "positions")) s.positions = get_int_list(b["positions"], p + ".positions");
    spec.blocks.push_back(std::move(s));
  }
  if (has(j, "scramble")) {
    const json& sc = j["scramble"];
    oracle::ScrambleSpec s;
    if (has(sc, "conj_cond_max")) s.conj_cond_max = get_finite(sc["conj_cond_max"], "$.scramble.conj_cond_max");
    if (has(sc, "perm_seed")) s.perm_seed = get_uint(sc["perm_seed"], "$.scramble.perm_seed");
    if (has(sc, "noise")) s.noise = get_finite(sc["noise"], "$.scramble.noise");
    if (has(sc, "reflections")) s.reflections = static_cast<int>(get_int(sc["reflections"], "$.scramble.reflections"));
    spec.scramble = s;
  }
  return spec;
}

FamilySpec load_spec(const std::filesystem::path& path) { return parse_spec(read_text(path)); }

std::string dump_spec(const FamilySpec& spec) {
  json j;
  j["format"] = kSpecFormat;
  j["N"] = spec.N;
  j["field_mode"] = to_string(spec.mode);
  if (!spec.labels.empty()) j["labels"] = spec.labels;
  json blocks = json::array();
  for (const auto& s : spec.blocks) {
    json b;
    b["kind"] = to_string(s.kind);
    b["dim"] = s.dim;
    b["support"] = s.support;
    json c = json::array();
    for (int a : s.support) c.push_back(scalar_json(s.constants.count(a) ? s.constants.at(a) : Scalar(0.0)));
    b["constants"] = c;
    b["seed"] = s.seed;
    if (!s.positions.empty()) b["positions"] = s.positions;
    blocks.push_back(std::move(b));
  }
  j["blocks"] = blocks;
  if (spec.scramble) {
    j["scramble"] = {{"conj_cond_max", spec.scramble->conj_cond_max},
                     {"perm_seed", spec.scramble->perm_seed},
                     {"noise", spec.scramble->noise},
                     {"reflections", spec.scramble->reflections}};
  }
  return render(j);
}

// ---- skeletons ---------------------------------------------------------------

oracle::Skeleton parse_skeleton(const std::string& text) {
  const json j = parse_text(text);
  if (!j.is_object()) fail("$", "expected an object");
  check_format(j, kSkeletonFormat);
  oracle::Skeleton s;
  s.n = static_cast<int>(get_int(field(j, "n", "$"), "$.n"));
  s.N = static_cast<int>(get_int(field(j, "N", "$"), "$.N"));
  const json& blocks = field(j, "blocks", "$");
  if (!blocks.is_array()) fail("$.blocks", "expected an array");
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const std::string p = "$.blocks[" + std::to_string(i) + "]";
    oracle::ExpectedBlock b;
    b.kind = kind_from(field(blocks[i], "kind", p), p + ".kind");
    b.support = get_int_list(field(blocks[i], "support", p), p + ".support");
    b.constants = get_scalar_list(field(blocks[i], "constants", p), p + ".constants");
    b.dim = static_cast<int>(get_int(field(blocks[i], "dim", p), p + ".dim"));
    s.blocks.push_back(std::move(b));
  }
  return s;
}

std::string dump_skeleton(const oracle::Skeleton& skel) {
  json j;
  j["format"] = kSkeletonFormat;
  j["n"] = skel.n;
  j["N"] = skel.N;
  json blocks = json::array();
  for (const auto& b : skel.blocks) {
    blocks.push_back({{"kind", to_string(b.kind)},
                      {"support", b.support},
                      {"constants", scalar_list_json(b.constants)},
                      {"dim", b.dim}});
  }
  j["blocks"] = blocks;
  return render(j);
}

// ---- reports -----------------------------------------------------------------

std::string dump_report(const ReportFile& r) {
  const DecompositionReport& rep = r.report;
  json j;
  j["format"] = kReportFormat;
  j["input"] = {{"source", r.source},
                {"field_mode", to_string(rep.field_mode)},
                {"n", rep.n},
                {"N", rep.N},
                {"operators", rep.labels}};
  j["tolerance"] = {{"rel_zero", rep.tolerance.rel_zero},
                    {"eig_cluster", rep.tolerance.eig_cluster},
                    {"scale", rep.tolerance.scale}};

  json classes = json::array();
  for (std::size_t a = 0; a < rep.classes.size(); ++a) {
    const OperatorClass& c = rep.classes[a];
    classes.push_back({{"operator", rep.labels.at(a)},
                       {"kind", to_string(c.kind)},
                       {"condition", real_value(c.condition)},
                       {"kernel_dim", c.kernel_dim},
                       {"kernel_gap", c.kernel_gap},
                       {"ill_conditioned", c.ill_conditioned}});
  }
  j["classes"] = classes;

  json blocks = json::array();
  for (const Block& b : rep.blocks) {
    json jb;
    jb["kind"] = to_string(b.kind);
    jb["dim"] = b.dim();
    jb["columns"] = b.columns;
    json support = json::array();
    for (int a : b.support) support.push_back(rep.labels.at(a));
    jb["support"] = support;
    json constants = json::object();
    for (int a : b.support) constants[rep.labels.at(a)] = scalar_json(b.constants.at(a));
    jb["constants"] = constants;
    if (b.signature) jb["signature"] = {{"p", b.signature->p}, {"q", b.signature->q}};
    jb["invariance_leak"] = real_value(b.invariance_leak);
    jb["constancy_residual"] = real_value(b.constancy_residual);
    jb["note"] = b.note;
    json groups = json::array();
    for (const auto& g : b.groups) groups.push_back({{"columns", g.columns}, {"constants", scalar_list_json(g.constants)}});
    jb["groups"] = groups;
    json restrictions = json::object();
    for (std::size_t x = 0; x < b.support.size(); ++x)
      restrictions[rep.labels.at(b.support[x])] = matrix_json(b.restrictions.at(x), false);
    jb["restrictions"] = restrictions;
    blocks.push_back(std::move(jb));
  }
  j["blocks"] = blocks;

  json groups = json::array();
  for (const auto& sg : rep.support_groups) {
    json support = json::array();
    for (int a : sg.support) support.push_back(rep.labels.at(a));
    groups.push_back({{"support", support}, {"blocks", sg.blocks}});
  }
  j["support_groups"] = groups;
  j["residuals"] = {{"anticommutation", real_value(rep.residuals.anticommutation)},
                    {"invariance", real_value(rep.residuals.invariance)},
                    {"constancy", real_value(rep.residuals.constancy)},
                    {"block_anticommutation", real_value(rep.residuals.block_anticommutation)},
                    {"simdiag_offdiag", real_value(rep.residuals.simdiag_offdiag)}};
  j["real_structure"] = rep.real_structure;
  j["ill_conditioned"] = rep.ill_conditioned;
  j["notes"] = rep.notes;
  j["P"] = matrix_json(rep.P, false);

  if (r.canonical) {
    json forms = json::array();
    for (const auto& f : r.canonical->forms) forms.push_back(form_json(f, rep));
    j["canonical"] = {{"max_residual", real_value(r.canonical->max_residual)}, {"forms", forms}};
  }
  j["diagnostics"] = {{"exit_code", r.diagnostics.exit_code}, {"messages", r.diagnostics.messages}};
  return render(j);
}

ReportFile parse_report(const std::string& text) {
  const json j = parse_text(text);
  if (!j.is_object()) fail("$", "expected an object");
  check_format(j, kReportFormat);
  ReportFile r;
  DecompositionReport& rep = r.report;

  const json& input = field(j, "input", "$");
  r.source = get_string(field(input, "source", "$.input"), "$.input.source");
  try {
    rep.field_mode = field_mode_from_string(get_string(field(input, "field_mode", "$.input"), "$.input.field_mode"));
  } catch (const PreconditionError& e) {
    fail("$.input.field_mode", e.what());
  }
  rep.n = static_cast<int>(get_int(field(input, "n", "$.input"), "$.input.n"));
  rep.N = static_cast<int>(get_int(field(input, "N", "$.input"), "$.input.N"));
  const json& ops = field(input, "operators", "$.input");
  if (!ops.is_array()) fail("$.input.operators", "expected an array");
  for (std::size_t a = 0; a < ops.size(); ++a) rep.labels.push_back(get_string(ops[a], "$.input.operators[" + std::to_string(a) + "]"));

  const json& tol = field(j, "tolerance", "$");
  rep.tolerance.rel_zero = get_real(field(tol, "rel_zero", "$.tolerance"), "$.tolerance.rel_zero");
  rep.tolerance.eig_cluster = get_real(field(tol, "eig_cluster", "$.tolerance"), "$.tolerance.eig_cluster");
  rep.tolerance.scale = get_real(field(tol, "scale", "$.tolerance"), "$.tolerance.scale");

  const json& classes = field(j, "classes", "$");
  for (std::size_t a = 0; a < classes.size(); ++a) {
    const std::string p = "$.classes[" + std::to_string(a) + "]";
    OperatorClass c;
    c.kind = operator_kind_from_string(get_string(field(classes[a], "kind", p), p + ".kind"), p + ".kind");
    c.condition = get_real(field(classes[a], "condition", p), p + ".condition");
    c.kernel_dim = static_cast<int>(get_int(field(classes[a], "kernel_dim", p), p + ".kernel_dim"));
    c.kernel_gap = static_cast<int>(get_int(field(classes[a], "kernel_gap", p), p + ".kernel_gap"));
    c.ill_conditioned = get_bool(field(classes[a], "ill_conditioned", p), p + ".ill_conditioned");
    rep.classes.push_back(c);
  }

  const json& blocks = field(j, "blocks", "$");
  if (!blocks.is_array()) fail("$.blocks", "expected an array");
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const std::string p = "$.blocks[" + std::to_string(i) + "]";
    const json& jb = blocks[i];
    Block b;
    b.kind = kind_from(field(jb, "kind", p), p + ".kind");
    b.columns = get_int_list(field(jb, "columns", p), p + ".columns");
    const json& support = field(jb, "support", p);
    for (std::size_t x = 0; x < support.size(); ++x) {
      const std::string sp = p + ".support[" + std::to_string(x) + "]";
      b.support.push_back(label_index(rep.labels, get_string(support[x], sp), sp));
    }
    const json& constants = field(jb, "constants", p);
    if (!constants.is_object()) fail(p + ".constants", "expected an object");
    for (auto it = constants.begin(); it != constants.end(); ++it) {
      const std::string cp = p + ".constants." + it.key();
      b.constants[label_index(rep.labels, it.key(), cp)] = get_scalar(it.value(), cp, false);
    }
    if (has(jb, "signature")) {
      Signature s;
      s.p = static_cast<int>(get_int(field(jb["signature"], "p", p + ".signature"), p + ".signature.p"));
      s.q = static_cast<int>(get_int(field(jb["signature"], "q", p + ".signature"), p + ".signature.q"));
      b.signature = s;
    }
    b.invariance_leak = get_real(field(jb, "invariance_leak", p), p + ".invariance_leak");
    b.constancy_residual = get_real(field(jb, "constancy_residual", p), p + ".constancy_residual");
    b.note = get_string(field(jb, "note", p), p + ".note");
    const json& groups = field(jb, "groups", p);
    for (std::size_t g = 0; g < groups.size(); ++g) {
      const std::string gp = p + ".groups[" + std::to_string(g) + "]";
      ConstantGroup cg;
      cg.columns = get_int_list(field(groups[g], "columns", gp), gp + ".columns");
      cg.constants = get_scalar_list(field(groups[g], "constants", gp), gp + ".constants");
      b.groups.push_back(std::move(cg));
    }
    const json& restrictions = field(jb, "restrictions", p);
    for (int a : b.support) {
      const std::string name = rep.labels.at(a);
      b.restrictions.push_back(get_matrix(field(restrictions, name, p + ".restrictions"), p + ".restrictions." + name, false));
    }
    rep.blocks.push_back(std::move(b));
  }

  const json& groups = field(j, "support_groups", "$");
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const std::string p = "$.support_groups[" + std::to_string(g) + "]";
    SupportGroup sg;
    const json& support = field(groups[g], "support", p);
    for (std::size_t x = 0; x < support.size(); ++x) {
      const std::string sp = p + ".support[" + std::to_string(x) + "]";
      sg.support.push_back(label_index(rep.labels, get_string(support[x], sp), sp));
    }
    sg.blocks = get_int_list(field(groups[g], "blocks", p), p + ".blocks");
    rep.support_groups.push_back(std::move(sg));
  }

  const json& res = field(j, "residuals", "$");
  rep.residuals.anticommutation = get_real(field(res, "anticommutation", "$.residuals"), "$.residuals.anticommutation");
  rep.residuals.invariance = get_real(field(res, "invariance", "$.residuals"), "$.residuals.invariance");
  rep.residuals.constancy = get_real(field(res, "constancy", "$.residuals"), "$.residuals.constancy");
  rep.residuals.block_anticommutation =
      get_real(field(res, "block_anticommutation", "$.residuals"), "$.residuals.block_anticommutation");
  rep.residuals.simdiag_offdiag = get_real(field(res, "simdiag_offdiag", "$.residuals"), "$.residuals.simdiag_offdiag");
  rep.real_structure = get_bool(field(j, "real_structure", "$"), "$.real_structure");
  rep.ill_conditioned = get_bool(field(j, "ill_conditioned", "$"), "$.ill_conditioned");
  const json& notes = field(j, "notes", "$");
  for (std::size_t i = 0; i < notes.size(); ++i) rep.notes.push_back(get_string(notes[i], "$.notes"));
  rep.P = get_matrix(field(j, "P", "$"), "$.P", false, rep.n, rep.n);

  if (has(j, "canonical")) {
    CanonicalResult c;
    c.max_residual = get_real(field(j["canonical"], "max_residual", "$.canonical"), "$.canonical.max_residual");
    const json& forms = field(j["canonical"], "forms", "$.canonical");
    for (std::size_t i = 0; i < forms.size(); ++i)
      c.forms.push_back(form_from_json(forms[i], "$.canonical.forms[" + std::to_string(i) + "]"));
    r.canonical = std::move(c);
  }
  const json& diag = field(j, "diagnostics", "$");
  r.diagnostics.exit_code = static_cast<int>(get_int(field(diag, "exit_code", "$.diagnostics"), "$.diagnostics.exit_code"));
  const json& messages = field(diag, "messages", "$.diagnostics");
  for (std::size_t i = 0; i < messages.size(); ++i)
    r.diagnostics.messages.push_back(get_string(messages[i], "$.diagnostics.messages"));
  return r;
}

std::string summarize(const ReportFile& r) {
  const DecompositionReport& rep = r.report;
  std::ostringstream os;
  os << "decomposition of " << (r.source.empty() ? "<family>" : r.source) << ": n=" << rep.n << " N=" << rep.N
     << " field=" << to_string(rep.field_mode) << "\n";
  os << "operators:";
  for (std::size_t a = 0; a < rep.labels.size(); ++a) {
    os << " " << rep.labels[a];
    if (a < rep.classes.size() && rep.classes[a].kind != OperatorKind::Diagonalizable)
      os << "(" << to_string(rep.classes[a].kind) << ")";
  }
  os << "\nblocks (" << rep.blocks.size() << "):\n";
  for (std::size_t i = 0; i < rep.blocks.size(); ++i) {
    const Block& b = rep.blocks[i];
    os << "  [" << i << "] " << std::left << std::setw(10) << to_string(b.kind) << " dim " << std::setw(3) << b.dim()
       << " support {";
    for (std::size_t x = 0; x < b.support.size(); ++x) os << (x ? "," : "") << rep.labels[b.support[x]];
    os << "}";
    auto put = [&os](Scalar c) {
      os << c.real();
      if (c.imag() != 0.0) os << (c.imag() > 0 ? "+" : "") << c.imag() << "i";
    };
    if (b.kind == BlockKind::Clifford) {
      os << " c=(";
      for (std::size_t x = 0; x < b.support.size(); ++x) {
        if (x) os << ",";
        put(b.constants.at(b.support[x]));
      }
      os << ")";
    } else if (b.kind == BlockKind::SingleOperator) {
      const int a = b.support.front();
      os << " c in {";
      for (std::size_t g = 0; g < b.groups.size(); ++g) {
        if (g) os << ",";
        put(b.groups[g].constants.at(a));
      }
      os << "}";
    }
    if (b.signature) os << " signature (" << b.signature->p << "," << b.signature->q << ")";
    os << "\n";
  }
  os << std::scientific << std::setprecision(2);
  os << "residuals: anticommutation " << rep.residuals.anticommutation << ", invariance " << rep.residuals.invariance
     << ", constancy " << rep.residuals.constancy << "\n";
  if (r.canonical) {
    int built = 0;
    int skipped = 0;
    for (const auto& f : r.canonical->forms) {
      if (f.skipped) ++skipped;
      if (!std::holds_alternative<std::monostate>(f.form)) ++built;
    }
    os << "canonical forms: " << built << " built, " << skipped << " skipped, max residual "
       << r.canonical->max_residual << "\n";
  }
  for (const auto& n : rep.notes) os << "note: " << n << "\n";
  for (const auto& m : r.diagnostics.messages) os << "diagnostic: " << m << "\n";
  os << "exit code " << r.diagnostics.exit_code << "\n";
  return os.str();
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError(path.string() + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw FormatError(path.string() + ": read error");
  return ss.str();
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError(path.string() + ": cannot open for writing");
    out << content;
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw FormatError(path.string() + ": write failed");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw FormatError(path.string() + ": rename failed");
  }
}

}  // namespace anticanon::io
