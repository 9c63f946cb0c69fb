#pragma once

// JSON model files and report fragments. Rationals always travel as
// strings so that nothing is rounded on the way in or out.

#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "credalkit/credal.hpp"
#include "credalkit/joint.hpp"

namespace credalkit::io {

using nlohmann::json;
using exactq::QVector;
using exactq::Rational;

/// Malformed input. The message names the offending field path or tuple.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ModelOptions {
  credal::PermutationPolicy permutations = credal::PermutationPolicy::synthesized;
  std::size_t finite_cap = joint::JointOptions{}.finite_cap;
};

struct Model {
  spaces::ProcessSpace space;
  credal::CredalCollection collection;
  ModelOptions options;
};

/**
 * Document shape:
 *   {"Y": [...], "T": [...],
 *    "credal_sets": [{"tuple": [...], "mode": "polytope-v", "vertices": [[...], ...]}
 *                  | {"tuple": [...], "mode": "polytope-h",
 *                     "hrep": [{"coeffs": [...], "sense": "<=" | ">=" | "=", "rhs": "..."}, ...]}
 *                  | {"tuple": [...], "mode": "finite", "members": [[...], ...]}],
 *    "options": {"permutations": "synthesized" | "supplied", "finite_cap": int}}
 */
Model parse_model(const json& doc);

/// Reads and parses a file; syntax errors report line and column.
json read_json_file(const std::filesystem::path& path);
std::string read_text_file(const std::filesystem::path& path);

/// Lowercase hex SHA-256 of the bytes.
std::string sha256_hex(const std::string& bytes);

/// `what` names the location for error messages, e.g. "credal_sets[1].rhs".
Rational parse_rational(const json& value, const std::string& what);
QVector parse_vector(const json& value, const std::string& what);

json to_json(const QVector& v);
json to_json(const spaces::ProcessSpace& space, const spaces::IndexTuple& t);
json to_json(const geom::SeparationCertificate& c);
json to_json(const credal::Witness& w);
json to_json(const spaces::ProcessSpace& space, const credal::CheckRecord& r);
json to_json(const spaces::ProcessSpace& space, const credal::ConsistencyReport& r);
json to_json(const joint::LiftedWitness& w);
json to_json(const spaces::ProcessSpace& space, const joint::RepresentationReport& r);
json to_json(const spaces::ProcessSpace& space, const joint::LemmaReport& r);
json to_json(const spaces::ProcessSpace& space, const joint::InconsistencyDiagnosis& d);

/// Inverses of the serializers above, used to re-check reported witnesses.
spaces::IndexTuple tuple_from_json(const spaces::ProcessSpace& space, const json& value);
geom::SeparationCertificate certificate_from_json(const json& value);
credal::Witness witness_from_json(const json& value);
credal::CheckRecord check_record_from_json(const spaces::ProcessSpace& space, const json& value);
joint::LiftedWitness lifted_witness_from_json(const json& value);

/// Writes to a sibling temporary and renames it into place.
void write_atomically(const std::filesystem::path& path, const std::string& contents);

}  // namespace credalkit::io
