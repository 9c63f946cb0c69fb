#include "credalkit/cli.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "credalkit/joint.hpp"
#include "credalkit/model_io.hpp"

namespace credalkit::cli {

using exactq::QVector;
using exactq::Rational;
using io::json;

namespace {

struct Loaded {
  std::string digest;
  io::Model model;
};

Loaded load(const std::string& path) {
  const std::string text = io::read_text_file(path);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw io::InputError(path + ": " + e.what());
  }
  return {io::sha256_hex(text), io::parse_model(doc)};
}

json report_base(const std::string& command, const Loaded& in) {
  const auto& space = in.model.space;
  return {{"tool_version", tool_version},
          {"input_digest", "sha256:" + in.digest},
          {"command", command},
          {"space", {{"Y", space.outcome_labels()}, {"T", space.index_labels()}, {"omega_size", space.omega_size()}}}};
}

// Shared output switches of the report-producing commands.
struct ReportOptions {
  std::string model;
  std::string report_path;
  bool json_stdout = false;
  bool vertices = false;
  std::size_t vertex_limit = 500;
};

void emit(const json& report, const std::string& human, const ReportOptions& o, std::ostream& out) {
  const std::string text = report.dump(2) + "\n";
  if (!o.report_path.empty()) io::write_atomically(o.report_path, text);
  out << (o.json_stdout ? text : human);
}

std::string vector_str(const QVector& v) {
  std::ostringstream ss;
  ss << v;
  return ss.str();
}

void describe_consistency(std::ostream& h, const spaces::ProcessSpace& space, credal::Condition cond,
                          const credal::ConsistencyReport& r) {
  h << "condition " << credal::to_string(cond) << ": " << (r.passed() ? "pass" : "FAIL") << " (" << r.records.size()
    << " records)\n";
  for (const auto& rec : r.records) {
    if (rec.status != credal::CheckStatus::fail) continue;
    h << "  " << rec.source.str(space) << " -> " << rec.target.str(space) << ", " << rec.direction;
    if (rec.witness) {
      h << ": witness " << vector_str(rec.witness->measure) << ", gap " << rec.witness->certificate.gap;
    }
    h << "\n";
  }
}

std::vector<QVector> joint_vertices(const joint::JointModel& j) {
  std::vector<QVector> verts;
  if (j.mode == credal::Mode::polytope) {
    verts = geom::enumerate_vertices(j.dim(), j.polytope->hrep());
  } else {
    for (const auto& cell : j.cells) {
      for (auto& v : geom::enumerate_vertices(j.dim(), cell.polytope.hrep())) verts.push_back(std::move(v));
    }
  }
  std::sort(verts.begin(), verts.end());
  verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
  return verts;
}

json joint_summary(const joint::JointModel& j, const ReportOptions& o) {
  json s = {{"mode", j.mode == credal::Mode::polytope ? "polytope" : "finite"},
            {"dimension", j.dim()},
            {"empty", j.is_empty()}};
  if (j.mode == credal::Mode::polytope && j.polytope) {
    s["inequalities"] = j.polytope->hrep().inequalities.size();
    s["equalities"] = j.polytope->hrep().equalities.size();
  }
  if (j.mode == credal::Mode::finite) {
    s["cells"] = j.cells.size();
    s["selections"] = j.selection_count;
  }
  if (j.diagnosis) s["diagnosis"] = io::to_json(j.space, *j.diagnosis);
  if (j.is_empty()) return s;
  if (const auto u = joint::unique_measure(j)) {
    s["single_measure"] = io::to_json(*u);
    s["note"] = "P is a single measure";
  }
  if (o.vertices) {
    const auto verts = joint_vertices(j);
    if (verts.size() <= o.vertex_limit) {
      json vs = json::array();
      for (const auto& v : verts) vs.push_back(io::to_json(v));
      s["vertices"] = vs;
    } else {
      s["vertices_omitted"] = std::to_string(verts.size()) + " vertices exceed the limit of " +
                              std::to_string(o.vertex_limit);
    }
  }
  return s;
}

std::string tuple_list(const spaces::ProcessSpace& space, const std::vector<spaces::IndexTuple>& ts) {
  std::string s;
  for (const auto& t : ts) s += (s.empty() ? "" : ", ") + t.str(space);
  return s;
}

json rows_json(const spaces::ProcessSpace& space, const std::vector<geom::LinearConstraint>& rows, const char* sense,
               const std::vector<joint::RowOrigin>* origins) {
  json out = json::array();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    json r = {{"coeffs", io::to_json(rows[i].coeffs)}, {"rhs", rows[i].rhs.str()}, {"sense", sense}};
    if (origins) {
      const auto& o = (*origins)[i];
      r["origin"] = o ? io::to_json(space, *o) : json("simplex");
    }
    out.push_back(std::move(r));
  }
  return out;
}

// ---------------------------------------------------------------------------

int cmd_validate(const ReportOptions& o, std::ostream& out) {
  const Loaded in = load(o.model);
  const auto& c = in.model.collection;
  const auto c1 = credal::check_condition1(c);
  const auto c2 = credal::check_condition2(c);
  const bool ok = c1.passed() && c2.passed();
  json report = report_base("validate", in);
  report["consistency"] = {{"passed", ok},
                           {"condition1", io::to_json(in.model.space, c1)},
                           {"condition2", io::to_json(in.model.space, c2)}};
  report["verdict"] = ok ? "consistent" : "inconsistent";
  std::ostringstream h;
  describe_consistency(h, in.model.space, credal::Condition::c1, c1);
  describe_consistency(h, in.model.space, credal::Condition::c2, c2);
  h << "verdict: " << (ok ? "consistent" : "inconsistent") << "\n";
  emit(report, h.str(), o, out);
  return ok ? exit_pass : exit_failure;
}

int cmd_verify(const ReportOptions& o, std::ostream& out) {
  const Loaded in = load(o.model);
  const auto& space = in.model.space;
  const auto& c = in.model.collection;
  const auto c1 = credal::check_condition1(c);
  const auto c2 = credal::check_condition2(c);
  const bool consistent = c1.passed() && c2.passed();
  const auto j = joint::build_joint(c, {in.model.options.finite_cap});
  const auto rep = joint::verify_representation(c, j);
  const auto lemmas = joint::lemma_suite(c, j);
  const bool ok = rep.passed();

  json report = report_base("verify", in);
  report["consistency"] = {
      {"passed", consistent}, {"condition1", io::to_json(space, c1)}, {"condition2", io::to_json(space, c2)}};
  report["joint"] = joint_summary(j, o);
  report["representation"] = io::to_json(space, rep);
  report["lemmas"] = io::to_json(space, lemmas);
  // Consistency and representability must agree; disagreement is a bug report.
  report["verdicts_agree"] = consistent == ok;
  report["verdict"] = ok ? "representable" : "not representable";

  std::ostringstream h;
  describe_consistency(h, space, credal::Condition::c1, c1);
  describe_consistency(h, space, credal::Condition::c2, c2);
  if (j.is_empty()) {
    h << "joint set: empty; offending tuples: " << tuple_list(space, j.diagnosis->tuples) << "\n";
  } else {
    h << "joint set: dimension " << j.dim();
    if (j.polytope) {
      h << ", " << j.polytope->hrep().inequalities.size() << " inequalities, "
        << j.polytope->hrep().equalities.size() << " equalities";
    } else {
      h << ", " << j.cells.size() << " cells";
    }
    if (report["joint"].contains("note")) h << "; " << report["joint"]["note"].get<std::string>();
    h << "\n";
  }
  h << "representation: " << (ok ? "pass" : "FAIL") << "\n";
  for (const auto& r : rep.records) {
    for (const auto* chk : {&r.image_in_set, &r.set_in_image}) {
      if (chk->status != credal::CheckStatus::fail) continue;
      h << "  " << r.tuple.str(space) << (chk == &r.image_in_set ? " image ⊆ set" : " set ⊆ image");
      if (chk->witness) h << ": witness " << vector_str(chk->witness->witness.measure);
      if (!chk->note.empty()) h << " (" << chk->note << ")";
      h << "\n";
    }
  }
  h << "lemmas: " << (lemmas.passed() ? "pass" : "FAIL") << (lemmas.any_strict() ? " (strict containment seen)" : "")
    << "\n";
  if (consistent != ok) h << "warning: consistency and representability disagree\n";
  h << "verdict: " << report["verdict"].get<std::string>() << "\n";
  emit(report, h.str(), o, out);
  return ok ? exit_pass : exit_failure;
}

int cmd_build(const ReportOptions& o, const std::string& output, std::ostream& out, std::ostream& err) {
  const Loaded in = load(o.model);
  const auto& space = in.model.space;
  const auto j = joint::build_joint(in.model.collection, {in.model.options.finite_cap});
  json doc = report_base("build", in);
  doc["joint"] = joint_summary(j, o);
  if (j.mode == credal::Mode::polytope && j.polytope) {
    const auto& h = j.polytope->hrep();
    doc["inequalities"] = rows_json(space, h.inequalities, "<=", &j.inequality_origin);
    doc["equalities"] = rows_json(space, h.equalities, "=", &j.equality_origin);
  }
  if (j.mode == credal::Mode::finite) {
    const auto tuples = spaces::all_canonical_tuples(space);
    json cells = json::array();
    for (const auto& cell : j.cells) {
      json sel = json::array();
      for (std::size_t k = 0; k < cell.selection.size(); ++k) {
        sel.push_back({{"tuple", io::to_json(space, tuples[k])}, {"member", io::to_json(cell.selection[k])}});
      }
      const auto& h = cell.polytope.hrep();
      cells.push_back({{"selection", sel},
                       {"point", io::to_json(cell.point)},
                       {"inequalities", rows_json(space, h.inequalities, "<=", nullptr)},
                       {"equalities", rows_json(space, h.equalities, "=", nullptr)}});
    }
    doc["cells"] = cells;
  }
  const std::string text = doc.dump(2) + "\n";
  if (output.empty()) {
    out << text;
  } else {
    io::write_atomically(output, text);
  }
  if (j.is_empty()) {
    err << "joint set is empty; offending tuples: " << tuple_list(space, j.diagnosis->tuples) << "\n";
    return exit_failure;
  }
  return exit_pass;
}

QVector read_function(const std::string& path) {
  const std::string text = io::read_text_file(path);
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '[') {
    try {
      return io::parse_vector(json::parse(text), path);
    } catch (const json::parse_error& e) {
      throw io::InputError(path + ": " + e.what());
    }
  }
  std::istringstream ss(text);
  QVector f;
  std::string token;
  for (std::size_t i = 0; ss >> token; ++i) {
    try {
      f.push_back(Rational::parse(token));
    } catch (const exactq::ParseError& e) {
      throw io::InputError(path + ": value " + std::to_string(i) + ": " + e.what());
    }
  }
  return f;
}

std::vector<std::string> split_labels(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != ' ') {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

int cmd_expect(const std::string& model, const std::string& tuple, const std::string& function_file,
               const std::string& bound, bool over_joint, std::ostream& out, std::ostream& err) {
  const Loaded in = load(model);
  const auto& space = in.model.space;
  const auto& c = in.model.collection;
  spaces::IndexTuple alpha;
  try {
    alpha = spaces::IndexTuple::from_labels(space, split_labels(tuple));
  } catch (const spaces::SpaceError& e) {
    throw io::InputError(std::string("--tuple: ") + e.what());
  }
  const QVector f = read_function(function_file);
  const std::size_t dim = space.product_size(alpha.size());
  if (f.size() != dim) {
    throw io::InputError(function_file + ": tuple " + alpha.str(space) + " needs " + std::to_string(dim) +
                         " values, got " + std::to_string(f.size()));
  }
  std::optional<credal::CredalSet> v;
  if (over_joint) {
    const auto j = joint::build_joint(c, {in.model.options.finite_cap});
    if (j.is_empty()) {
      err << "joint set is empty; offending tuples: " << tuple_list(space, j.diagnosis->tuples) << "\n";
      return exit_failure;
    }
    v = joint::pushforward_joint(j, alpha);
  } else {
    if (!c.defines(alpha)) throw io::InputError("--tuple: no credal set for " + alpha.str(space));
    v = c.at(alpha);
  }
  out << (bound == "lower" ? credal::lower_expectation(*v, f) : credal::upper_expectation(*v, f)) << "\n";
  return exit_pass;
}

int cmd_extend(const std::string& path, std::ostream& out) {
  const json doc = io::read_json_file(path);
  if (!doc.is_object()) throw io::InputError(path + ": expected an object with size, atoms and masses");
  for (const char* key : {"size", "atoms", "masses"}) {
    if (!doc.contains(key)) throw io::InputError(path + ": missing field \"" + key + "\"");
  }
  if (!doc["size"].is_number_unsigned()) throw io::InputError("size: expected a nonnegative integer");
  std::vector<std::vector<std::size_t>> atoms;
  if (!doc["atoms"].is_array()) throw io::InputError("atoms: expected an array");
  for (std::size_t i = 0; i < doc["atoms"].size(); ++i) {
    const json& atom = doc["atoms"][i];
    const std::string where = "atoms[" + std::to_string(i) + "]";
    if (!atom.is_array()) throw io::InputError(where + ": expected an array");
    std::vector<std::size_t> a;
    for (const auto& x : atom) {
      if (!x.is_number_unsigned()) throw io::InputError(where + ": expected nonnegative integers");
      a.push_back(x.get<std::size_t>());
    }
    atoms.push_back(std::move(a));
  }
  const QVector masses = io::parse_vector(doc["masses"], "masses");
  const QVector p = credal::extend_measure(doc["size"].get<std::size_t>(), atoms, masses);
  out << io::to_json(p).dump() << "\n";
  return exit_pass;
}

int guarded(const std::function<int()>& body, std::ostream& err) {
  try {
    return body();
  } catch (const joint::CapExceeded& e) {
    err << "error: " << e.what() << "\n";
    return exit_cap_exceeded;
  } catch (const io::InputError& e) {
    err << "input error: " << e.what() << "\n";
  } catch (const credal::CredalError& e) {
    err << "input error: " << e.what() << "\n";
  } catch (const spaces::SpaceError& e) {
    err << "input error: " << e.what() << "\n";
  } catch (const exactq::ParseError& e) {
    err << "input error: " << e.what() << "\n";
  } catch (const exactq::DimensionError& e) {
    err << "input error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return exit_internal_error;
  }
  return exit_input_error;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact credal-set consistency checks for finite-index stochastic processes", "credalkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", tool_version);

  ReportOptions ro;
  auto add_report_flags = [&](CLI::App* sub, bool with_vertices) {
    sub->add_option("model", ro.model, "Model file (JSON)")->required();
    sub->add_option("--report", ro.report_path, "Write the JSON report to this file");
    sub->add_flag("--json", ro.json_stdout, "Print the JSON report instead of the summary");
    if (with_vertices) {
      sub->add_flag("--vertices", ro.vertices, "Include the vertex list of the joint set");
      sub->add_option("--vertex-limit", ro.vertex_limit, "Largest vertex list to include")->capture_default_str();
    }
  };

  auto* validate = app.add_subcommand("validate", "Check permutation and marginal compatibility");
  add_report_flags(validate, false);

  auto* verify = app.add_subcommand("verify", "Full pipeline: conditions, joint set, representation, lemmas");
  add_report_flags(verify, true);

  std::string output;
  auto* build = app.add_subcommand("build", "Build the natural joint set and write its constraints");
  build->add_option("model", ro.model, "Model file (JSON)")->required();
  build->add_option("--output,-o", output, "Output file (default: standard output)");
  build->add_flag("--vertices", ro.vertices, "Include the vertex list of the joint set");
  build->add_option("--vertex-limit", ro.vertex_limit, "Largest vertex list to include")->capture_default_str();

  std::string tuple, function_file, bound = "lower";
  bool over_joint = false;
  auto* expect = app.add_subcommand("expect", "Lower or upper expectation of a function");
  expect->add_option("model", ro.model, "Model file (JSON)")->required();
  expect->add_option("--tuple", tuple, "Comma-separated index labels")->required();
  expect->add_option("--function-file", function_file, "One rational per outcome tuple")->required();
  expect->add_option("--bound", bound, "lower or upper")->check(CLI::IsMember({"lower", "upper"}));
  expect->add_flag("--joint", over_joint, "Bound over the pushforward of the joint set");

  std::string partition;
  auto* extend = app.add_subcommand("extend", "Extend a measure from a partition by uniform splitting");
  extend->add_option("partition", partition, "Partition file: {size, atoms, masses}")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_pass : exit_input_error;
  }

  return guarded(
      [&]() -> int {
        if (*validate) return cmd_validate(ro, out);
        if (*verify) return cmd_verify(ro, out);
        if (*build) return cmd_build(ro, output, out, err);
        if (*expect) return cmd_expect(ro.model, tuple, function_file, bound, over_joint, out, err);
        return cmd_extend(partition, out);
      },
      err);
}

}  // namespace credalkit::cli
