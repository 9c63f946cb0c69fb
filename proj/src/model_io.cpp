#include "credalkit/model_io.hpp"

#include <array>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include <openssl/evp.h>

namespace credalkit::io {

using credal::CheckRecord;
using credal::CheckStatus;
using credal::Condition;
using credal::CredalSet;
using geom::SeparationCertificate;
using spaces::IndexTuple;
using spaces::ProcessSpace;

namespace {

std::string at_index(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

const json& require(const json& obj, const char* key, const std::string& path) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw InputError(path + ": missing field \"" + key + "\"");
  return *it;
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& path) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) throw InputError(path + ": unknown field \"" + key + "\"");
  }
}

const json& require_array(const json& value, const std::string& what) {
  if (!value.is_array()) throw InputError(what + ": expected an array");
  return value;
}

std::string require_string(const json& value, const std::string& what) {
  if (!value.is_string()) throw InputError(what + ": expected a string");
  return value.get<std::string>();
}

std::vector<std::string> string_list(const json& value, const std::string& what) {
  std::vector<std::string> out;
  std::size_t i = 0;
  for (const auto& x : require_array(value, what)) out.push_back(require_string(x, at_index(what, i++)));
  return out;
}

std::vector<QVector> vector_list(const json& value, const std::string& what, std::size_t dim,
                                 const std::string& tuple_name) {
  std::vector<QVector> out;
  std::size_t i = 0;
  for (const auto& x : require_array(value, what)) {
    const std::string where = at_index(what, i++);
    QVector v = parse_vector(x, where);
    if (v.size() != dim) {
      throw InputError(where + ": tuple " + tuple_name + " needs " + std::to_string(dim) + " entries, got " +
                       std::to_string(v.size()));
    }
    out.push_back(std::move(v));
  }
  return out;
}

geom::HRep parse_hrep(const json& value, const std::string& what, std::size_t dim, const std::string& tuple_name) {
  geom::HRep h;
  std::size_t i = 0;
  for (const auto& row : require_array(value, what)) {
    const std::string where = at_index(what, i++);
    if (!row.is_object()) throw InputError(where + ": expected an object");
    reject_unknown(row, {"coeffs", "sense", "rhs"}, where);
    QVector coeffs = parse_vector(require(row, "coeffs", where), where + ".coeffs");
    if (coeffs.size() != dim) {
      throw InputError(where + ".coeffs: tuple " + tuple_name + " needs " + std::to_string(dim) + " entries, got " +
                       std::to_string(coeffs.size()));
    }
    Rational rhs = parse_rational(require(row, "rhs", where), where + ".rhs");
    const std::string sense = require_string(require(row, "sense", where), where + ".sense");
    if (sense == "<=") {
      h.inequalities.push_back({std::move(coeffs), std::move(rhs)});
    } else if (sense == ">=") {
      h.inequalities.push_back({-coeffs, -rhs});
    } else if (sense == "=") {
      h.equalities.push_back({std::move(coeffs), std::move(rhs)});
    } else {
      throw InputError(where + ".sense: expected \"<=\", \">=\" or \"=\", got \"" + sense + "\"");
    }
  }
  return h;
}

CredalSet parse_entry(const ProcessSpace& space, const json& entry, const std::string& path) {
  if (!entry.is_object()) throw InputError(path + ": expected an object");
  reject_unknown(entry, {"tuple", "mode", "vertices", "hrep", "members"}, path);
  IndexTuple tuple;
  try {
    tuple = IndexTuple::from_labels(space, string_list(require(entry, "tuple", path), path + ".tuple"));
  } catch (const spaces::SpaceError& e) {
    throw InputError(path + ".tuple: " + e.what());
  }
  const std::string name = tuple.str(space);
  const std::size_t dim = space.product_size(tuple.size());
  const std::string mode = require_string(require(entry, "mode", path), path + ".mode");
  const char* body_key = mode == "polytope-v" ? "vertices" : mode == "polytope-h" ? "hrep" : "members";
  if (mode != "polytope-v" && mode != "polytope-h" && mode != "finite") {
    throw InputError(path + ".mode: expected \"polytope-v\", \"polytope-h\" or \"finite\", got \"" + mode + "\"");
  }
  for (const char* key : {"vertices", "hrep", "members"}) {
    if (key != std::string(body_key) && entry.contains(key)) {
      throw InputError(path + ": field \"" + key + "\" does not belong to mode \"" + mode + "\"");
    }
  }
  const json& body = require(entry, body_key, path);
  const std::string where = path + "." + body_key;
  try {
    if (mode == "polytope-v") return CredalSet::from_vertices(space, tuple, vector_list(body, where, dim, name));
    if (mode == "finite") return CredalSet::from_members(space, tuple, vector_list(body, where, dim, name));
    return CredalSet::from_hrep(space, tuple, parse_hrep(body, where, dim, name));
  } catch (const credal::CredalError& e) {
    throw InputError(path + " (tuple " + name + "): " + e.what());
  }
}

ModelOptions parse_options(const json& value) {
  ModelOptions o;
  if (!value.is_object()) throw InputError("options: expected an object");
  reject_unknown(value, {"permutations", "finite_cap"}, "options");
  if (value.contains("permutations")) {
    const std::string p = require_string(value["permutations"], "options.permutations");
    if (p == "synthesized") {
      o.permutations = credal::PermutationPolicy::synthesized;
    } else if (p == "supplied") {
      o.permutations = credal::PermutationPolicy::supplied;
    } else {
      throw InputError("options.permutations: expected \"synthesized\" or \"supplied\", got \"" + p + "\"");
    }
  }
  if (value.contains("finite_cap")) {
    const json& cap = value["finite_cap"];
    if (!cap.is_number_unsigned() || cap.get<std::size_t>() == 0) {
      throw InputError("options.finite_cap: expected a positive integer");
    }
    o.finite_cap = cap.get<std::size_t>();
  }
  return o;
}

}  // namespace

Rational parse_rational(const json& value, const std::string& what) {
  if (value.is_number_integer()) return Rational(value.get<long>());
  if (!value.is_string()) throw InputError(what + ": expected a rational string such as \"3/7\"");
  try {
    return Rational::parse(value.get<std::string>());
  } catch (const exactq::ParseError& e) {
    throw InputError(what + ": " + e.what());
  }
}

QVector parse_vector(const json& value, const std::string& what) {
  QVector v;
  std::size_t i = 0;
  for (const auto& x : require_array(value, what)) v.push_back(parse_rational(x, at_index(what, i++)));
  return v;
}

Model parse_model(const json& doc) {
  if (!doc.is_object()) throw InputError("model: expected a JSON object");
  reject_unknown(doc, {"Y", "T", "credal_sets", "options"}, "model");
  std::optional<ProcessSpace> space;
  try {
    space.emplace(string_list(require(doc, "T", "model"), "T"), string_list(require(doc, "Y", "model"), "Y"));
  } catch (const spaces::SpaceError& e) {
    throw InputError(std::string("Y/T: ") + e.what());
  }
  const ModelOptions options = doc.contains("options") ? parse_options(doc["options"]) : ModelOptions{};
  std::vector<CredalSet> sets;
  std::size_t i = 0;
  for (const auto& entry : require_array(require(doc, "credal_sets", "model"), "credal_sets")) {
    sets.push_back(parse_entry(*space, entry, at_index("credal_sets", i++)));
  }
  try {
    credal::CredalCollection c(*space, std::move(sets), options.permutations);
    return Model{*space, std::move(c), options};
  } catch (const credal::CredalError& e) {
    throw InputError(std::string("credal_sets: ") + e.what());
  }
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path.string() + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json_file(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

std::string sha256_hex(const std::string& bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 computation failed");
  }
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int{digest[i]};
  return hex.str();
}

// ---------------------------------------------------------------------------

json to_json(const QVector& v) { return v.to_strings(); }

json to_json(const ProcessSpace& space, const IndexTuple& t) { return t.labels(space); }

json to_json(const SeparationCertificate& c) {
  json fs = json::array();
  for (const auto& f : c.functionals) fs.push_back(to_json(f));
  return {{"form", c.form == SeparationCertificate::Form::halfspace ? "halfspace" : "pointwise"},
          {"functionals", fs},
          {"gap", c.gap.str()},
          {"point", to_json(c.point)}};
}

json to_json(const credal::Witness& w) { return {{"measure", to_json(w.measure)}, {"certificate", to_json(w.certificate)}}; }

json to_json(const ProcessSpace& space, const CheckRecord& r) {
  json j = {{"condition", credal::to_string(r.condition)},
            {"source", to_json(space, r.source)},
            {"target", to_json(space, r.target)},
            {"direction", r.direction},
            {"status", credal::to_string(r.status)},
            {"note", r.note}};
  if (r.witness) j["witness"] = to_json(*r.witness);
  return j;
}

json to_json(const ProcessSpace& space, const credal::ConsistencyReport& r) {
  json records = json::array();
  for (const auto& rec : r.records) records.push_back(to_json(space, rec));
  return {{"passed", r.passed()}, {"records", records}};
}

json to_json(const joint::LiftedWitness& w) {
  json j = to_json(w.witness);
  json lifted = json::array();
  for (const auto& f : w.lifted) lifted.push_back(to_json(f));
  j["lifted"] = lifted;
  return j;
}

namespace {

json to_json(const joint::InclusionCheck& c) {
  json j = {{"status", credal::to_string(c.status)}, {"note", c.note}};
  if (c.witness) j["witness"] = io::to_json(*c.witness);
  return j;
}

}  // namespace

json to_json(const ProcessSpace& space, const joint::RepresentationReport& r) {
  json records = json::array();
  for (const auto& rec : r.records) {
    records.push_back({{"tuple", to_json(space, rec.tuple)},
                       {"image_in_set", to_json(rec.image_in_set)},
                       {"set_in_image", to_json(rec.set_in_image)}});
  }
  return {{"passed", r.passed()}, {"joint_empty", r.joint_empty}, {"records", records}};
}

json to_json(const ProcessSpace& space, const joint::LemmaReport& r) {
  json records = json::array();
  for (const auto& rec : r.records) {
    records.push_back({{"lemma", rec.lemma},
                       {"alpha", to_json(space, rec.alpha)},
                       {"beta", to_json(space, rec.beta)},
                       {"holds", rec.holds},
                       {"strict", rec.strict},
                       {"note", rec.note}});
  }
  return {{"passed", r.passed()}, {"any_strict", r.any_strict()}, {"sigma_note", r.sigma_note}, {"records", records}};
}

json to_json(const ProcessSpace& space, const joint::InconsistencyDiagnosis& d) {
  json tuples = json::array();
  for (const auto& t : d.tuples) tuples.push_back(to_json(space, t));
  json j = {{"tuples", tuples}};
  if (!d.farkas) return j;
  // Only rows with a nonzero multiplier take part in the certificate.
  json rows = json::array();
  const std::size_t ni = d.system.inequalities.size();
  auto origin = [&](const joint::RowOrigin& o) -> json { return o ? to_json(space, *o) : json("simplex"); };
  for (std::size_t i = 0; i < d.farkas->size(); ++i) {
    const Rational& y = (*d.farkas)[i];
    if (y.is_zero()) continue;
    const bool ineq = i < ni;
    const auto& row = ineq ? d.system.inequalities[i] : d.system.equalities[i - ni];
    rows.push_back({{"sense", ineq ? "<=" : "="},
                    {"coeffs", to_json(row.coeffs)},
                    {"rhs", row.rhs.str()},
                    {"multiplier", y.str()},
                    {"origin", origin(ineq ? d.inequality_origin[i] : d.equality_origin[i - ni])}});
  }
  j["farkas_rows"] = rows;
  return j;
}

// ---------------------------------------------------------------------------

IndexTuple tuple_from_json(const ProcessSpace& space, const json& value) {
  try {
    return IndexTuple::from_labels(space, string_list(value, "tuple"));
  } catch (const spaces::SpaceError& e) {
    throw InputError(std::string("tuple: ") + e.what());
  }
}

SeparationCertificate certificate_from_json(const json& value) {
  SeparationCertificate c;
  const std::string form = require_string(require(value, "form", "certificate"), "certificate.form");
  if (form != "halfspace" && form != "pointwise") throw InputError("certificate.form: unknown form \"" + form + "\"");
  c.form = form == "halfspace" ? SeparationCertificate::Form::halfspace : SeparationCertificate::Form::pointwise;
  std::size_t i = 0;
  for (const auto& f : require_array(require(value, "functionals", "certificate"), "certificate.functionals")) {
    c.functionals.push_back(parse_vector(f, at_index("certificate.functionals", i++)));
  }
  c.gap = parse_rational(require(value, "gap", "certificate"), "certificate.gap");
  c.point = parse_vector(require(value, "point", "certificate"), "certificate.point");
  return c;
}

credal::Witness witness_from_json(const json& value) {
  return {parse_vector(require(value, "measure", "witness"), "witness.measure"),
          certificate_from_json(require(value, "certificate", "witness"))};
}

CheckRecord check_record_from_json(const ProcessSpace& space, const json& value) {
  CheckRecord r{Condition::c1, {}, {}, "", CheckStatus::pass, std::nullopt, ""};
  const std::string cond = require_string(require(value, "condition", "record"), "record.condition");
  if (cond != "C1" && cond != "C2") throw InputError("record.condition: unknown condition \"" + cond + "\"");
  r.condition = cond == "C1" ? Condition::c1 : Condition::c2;
  r.source = tuple_from_json(space, require(value, "source", "record"));
  r.target = tuple_from_json(space, require(value, "target", "record"));
  r.direction = require_string(require(value, "direction", "record"), "record.direction");
  const std::string status = require_string(require(value, "status", "record"), "record.status");
  bool known = false;
  for (auto s : {CheckStatus::pass, CheckStatus::fail, CheckStatus::unchecked, CheckStatus::by_construction}) {
    if (credal::to_string(s) == status) {
      r.status = s;
      known = true;
    }
  }
  if (!known) throw InputError("record.status: unknown status \"" + status + "\"");
  if (value.contains("note")) r.note = require_string(value["note"], "record.note");
  if (value.contains("witness")) r.witness = witness_from_json(value["witness"]);
  return r;
}

joint::LiftedWitness lifted_witness_from_json(const json& value) {
  joint::LiftedWitness w{witness_from_json(value), {}};
  std::size_t i = 0;
  for (const auto& f : require_array(require(value, "lifted", "witness"), "witness.lifted")) {
    w.lifted.push_back(parse_vector(f, at_index("witness.lifted", i++)));
  }
  return w;
}

void write_atomically(const std::filesystem::path& path, const std::string& contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError(path.string() + ": cannot write file");
    out << contents;
    if (!out.flush()) throw InputError(path.string() + ": write failed");
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace credalkit::io
