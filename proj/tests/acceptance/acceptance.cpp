// Acceptance suite: one PASS/FAIL line per criterion, exact checks only.

#include <algorithm>
#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "credalkit/cli.hpp"
#include "credalkit/double_description.hpp"
#include "credalkit/joint.hpp"
#include "credalkit/model_io.hpp"
#include "support/generators.hpp"
#include "support/model_files.hpp"
#include "support/oracles.hpp"

namespace {

using namespace credalkit;
using credal::CredalCollection;
using credal::CredalSet;
using exactq::QVector;
using exactq::Rational;
using spaces::IndexTuple;
using spaces::ProcessSpace;
using testing::json;
using testing::RandomRationals;
using testing::Row;

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Every certificate checked anywhere in the suite; criterion 8 reports on all of them.
struct CertificateLedger {
  int checked = 0;
  int failed = 0;
  void record(bool ok) {
    ++checked;
    if (!ok) ++failed;
  }
} ledger;

struct Instance {
  testing::GeneratedInstance gen;
  joint::JointModel joint;
};

std::vector<Instance> instances;

std::vector<Row> rows_of(const std::vector<geom::LinearConstraint>& cs) {
  std::vector<Row> out;
  for (const auto& c : cs) out.push_back({c.coeffs, c.rhs});
  return out;
}

// Positions in `source` of the labels of `target`, for brute_pushforward.
std::vector<std::size_t> pick_of(const ProcessSpace& space, const IndexTuple& source, const IndexTuple& target) {
  const auto s = source.labels(space);
  std::vector<std::size_t> pick;
  for (const auto& l : target.labels(space)) {
    pick.push_back(static_cast<std::size_t>(std::find(s.begin(), s.end(), l) - s.begin()));
  }
  return pick;
}

// Halfspace or pointwise certificate checked generator by generator, without the library.
bool certificate_holds(const geom::SeparationCertificate& c, const std::vector<QVector>& generators) {
  if (c.gap.sign() <= 0 || c.functionals.empty()) return false;
  for (const auto& v : generators) {
    bool ok = false;
    for (const auto& g : c.functionals) {
      const Rational d = exactq::dot(g, c.point) - exactq::dot(g, v);
      if (c.form == geom::SeparationCertificate::Form::halfspace ? d >= c.gap : d.abs() >= c.gap) ok = true;
    }
    if (!ok) return false;
  }
  return true;
}

// Σ y·row = 0 and Σ y·rhs < 0 with y ≥ 0 on the ≤ rows.
bool farkas_rows_hold(const json& rows, std::size_t dim) {
  QVector combo(dim);
  Rational rhs;
  for (const auto& r : rows) {
    const Rational y = Rational::parse(r["multiplier"].get<std::string>());
    if (r["sense"] == "<=" && y.sign() < 0) return false;
    combo += io::parse_vector(r["coeffs"], "coeffs") * y;
    rhs += y * Rational::parse(r["rhs"].get<std::string>());
  }
  return combo.is_zero() && rhs.sign() < 0;
}

// ---------------------------------------------------------------------------

Outcome round_trip_representation() {
  const auto start = std::chrono::steady_clock::now();
  RandomRationals rng(2024);
  testing::ScratchDir dir;
  int validated = 0, contained = 0, represented = 0;
  const int n = 24;
  for (int i = 0; i < n; ++i) {
    const std::size_t k = i % 2 ? 3 : 2;
    auto gen = testing::generate_instance(rng, k, static_cast<std::size_t>(rng.integer(4, 8)), 12);
    const auto model = dir.write("m.json", testing::model_json(gen.collection));
    if (testing::run_cli({"validate", model}).code == cli::exit_pass) ++validated;
    auto j = joint::build_joint(gen.collection);
    bool all_in = !j.is_empty();
    for (const auto& v : gen.p0_vertices) all_in = all_in && geom::contains_point(*j.polytope, v);
    if (all_in) ++contained;
    if (joint::verify_representation(gen.collection, j).passed()) ++represented;
    instances.push_back({std::move(gen), std::move(j)});
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::ostringstream d;
  d << n << " instances; validate exit 0: " << validated << "; P contains P0: " << contained
    << "; representation exact: " << represented << "; " << static_cast<int>(secs) << " s";
  return {validated == n && contained == n && represented == n && secs < 60, d.str()};
}

Outcome shortcut() {
  int equal = 0;
  for (const auto& inst : instances) {
    const auto& c = inst.gen.collection;
    const auto gamma = IndexTuple::full(c.space());
    if (geom::equals(*inst.joint.polytope, joint::preimage_set(c, gamma))) ++equal;
  }
  std::ostringstream d;
  d << equal << "/" << instances.size() << " instances with P = preimage of the full tuple";
  return {!instances.empty() && equal == static_cast<int>(instances.size()), d.str()};
}

Outcome lemmas() {
  int l2 = 0, l3 = 0, broken = 0, strict = 0;
  for (const auto& inst : instances) {
    const auto r = joint::lemma_suite(inst.gen.collection, inst.joint);
    for (const auto& rec : r.records) {
      if (rec.lemma == "permutation_invariance") ++l2;
      if (rec.lemma == "monotonicity") ++l3;
      if (rec.lemma == "monotonicity" && rec.strict) ++strict;
      if ((rec.lemma == "permutation_invariance" || rec.lemma == "monotonicity") && !rec.holds) ++broken;
    }
  }
  std::ostringstream d;
  d << l2 << " permutation-invariance checks, " << l3 << " containment checks, " << broken << " violations, "
    << strict << " strict containments";
  return {l2 > 0 && l3 > 0 && broken == 0 && strict > 0, d.str()};
}

Outcome necessity() {
  testing::ScratchDir dir;
  for (const auto& inst : instances) {
    const auto& c = inst.gen.collection;
    const auto& space = c.space();
    for (const auto& [alpha, v] : c.supplied()) {
      const std::vector<QVector> gens = v.generators();
      for (std::size_t drop = 0; gens.size() > 1 && drop < gens.size(); ++drop) {
        json doc = testing::model_json(c);
        for (auto& entry : doc["credal_sets"]) {
          if (io::tuple_from_json(space, entry["tuple"]) == alpha) entry["vertices"].erase(drop);
        }
        const std::string model = dir.write("m.json", doc);
        const std::string report = dir.file("r.json");
        const auto run = testing::run_cli({"validate", model, "--report", report});
        if (run.code == cli::exit_pass) continue;
        if (run.code != cli::exit_failure) return {false, "validate exited with " + std::to_string(run.code)};

        const io::Model mutated = io::parse_model(doc);
        const json rep = io::read_json_file(report);
        int c2_failures = 0, verified = 0;
        for (const auto& rec_json : rep["consistency"]["condition2"]["records"]) {
          const auto rec = io::check_record_from_json(space, rec_json);
          if (rec.status != credal::CheckStatus::fail) continue;
          ++c2_failures;
          // Comparison set: V_target itself, or the image of V_source's generators.
          std::vector<QVector> against;
          const auto src = mutated.collection.at(rec.source).generators();
          if (rec.direction == "image ⊆ target") {
            against = mutated.collection.at(rec.target).generators();
          } else {
            for (const auto& g : src) {
              against.push_back(testing::brute_pushforward(g, 2, rec.source.size(),
                                                           pick_of(space, rec.source, rec.target)));
            }
          }
          const bool ok = rec.witness && certificate_holds(rec.witness->certificate, against) &&
                          credal::verify_record(mutated.collection, rec);
          ledger.record(ok);
          if (ok) ++verified;
        }
        std::ostringstream d;
        d << "dropped vertex " << drop << " of V" << alpha.str(space) << "; validate exit 1; " << c2_failures
          << " failing C2 records, " << verified << " witnesses re-verified from the report";
        return {c2_failures > 0 && verified == c2_failures, d.str()};
      }
    }
  }
  return {false, "no single-vertex mutation broke condition 2"};
}

Outcome classical_degeneration() {
  const ProcessSpace abc({"a", "b", "c"}, {"0", "1"});
  std::vector<CredalSet> sets;
  for (const auto& t : spaces::all_canonical_tuples(abc)) {
    const std::size_t d = abc.product_size(t.size());
    sets.push_back(CredalSet::from_vertices(abc, t, {QVector(d, Rational(1, static_cast<long>(d)))}));
  }
  const CredalCollection c(abc, sets);
  const auto j = joint::build_joint(c);
  if (j.is_empty()) return {false, "joint set is empty"};

  // Kolmogorov product of the singleton laws, coordinate by coordinate.
  std::vector<QVector> singles;
  for (const char* t : {"a", "b", "c"}) singles.push_back(c.at(IndexTuple::from_labels(abc, {t})).generators()[0]);
  QVector product(8);
  for (std::size_t w = 0; w < 8; ++w) {
    const auto dig = testing::digits(w, 2, 3);
    Rational p = 1;
    for (std::size_t i = 0; i < 3; ++i) p *= singles[i][dig[i]];
    product[w] = p;
  }
  const auto verts = geom::dd_convert(*j.polytope).vrep().vertices;
  const auto unique = joint::unique_measure(j);
  int reproduced = 0, total = 0;
  for (const auto& t : spaces::all_canonical_tuples(abc)) {
    ++total;
    const auto img = joint::pushforward_joint(j, t).generators();
    const QVector expected = testing::brute_pushforward(product, 2, 3, pick_of(abc, IndexTuple::full(abc), t));
    if (img.size() == 1 && img[0] == c.at(t).generators()[0] && img[0] == expected) ++reproduced;
  }
  const bool single = verts.size() == 1 && verts[0] == product && unique && *unique == product;
  std::ostringstream d;
  d << "P has " << verts.size() << " vertex; equals the product measure: " << (single ? "yes" : "no") << "; "
    << reproduced << "/" << total << " singletons reproduced";
  return {single && reproduced == total, d.str()};
}

Outcome inconsistency_diagnosis() {
  testing::ScratchDir dir;
  const json doc = json::parse(R"({"Y": ["0", "1"], "T": ["a", "b"], "credal_sets": [
    {"tuple": ["a"], "mode": "polytope-v", "vertices": [["1", "0"]]},
    {"tuple": ["b"], "mode": "polytope-h", "hrep": []},
    {"tuple": ["a", "b"], "mode": "polytope-v", "vertices": [["0", "0", "0", "1"]]}]})");
  const std::string model = dir.write("m.json", doc);
  const std::string out = dir.file("p.json");
  const auto build = testing::run_cli({"build", model, "--output", out});
  const auto verify = testing::run_cli({"verify", model});
  const json p = io::read_json_file(out);
  const json& diag = p["joint"]["diagnosis"];
  const bool tuples = diag["tuples"] == json::parse(R"([["a"], ["a", "b"]])");
  const bool farkas = farkas_rows_hold(diag["farkas_rows"], 4);
  ledger.record(farkas);
  std::ostringstream d;
  d << "build exit " << build.code << ", verify exit " << verify.code << "; empty: " << p["joint"]["empty"]
    << "; tuples " << diag["tuples"].dump() << "; Farkas rows re-verified: " << (farkas ? "yes" : "no");
  return {build.code == cli::exit_failure && verify.code == cli::exit_failure && p["joint"]["empty"] == true &&
              tuples && farkas,
          d.str()};
}

Outcome expectation_oracle() {
  RandomRationals rng(77);
  int agree = 0;
  const int n = 60;
  for (int i = 0; i < n; ++i) {
    const ProcessSpace space = i % 3 == 0 ? ProcessSpace({"a"}, {"0", "1", "2"}) : testing::binary_space(1 + i % 3);
    const IndexTuple t = IndexTuple::full(space);
    const std::size_t dim = space.omega_size();
    QVector f(dim);
    for (auto& x : f) x = rng.rational(-5, 5, 7);
    std::vector<QVector> vertices;
    std::optional<CredalSet> v;
    if (i % 2 == 0) {
      for (long k = rng.integer(1, 6); k > 0; --k) vertices.push_back(rng.measure(dim, 12));
      v = CredalSet::from_vertices(space, t, vertices);
    } else {
      // Simplex cut by halfspaces that keep the uniform measure.
      geom::HRep h;
      const QVector u(dim, Rational(1, static_cast<long>(dim)));
      for (long k = rng.integer(1, 3); k > 0; --k) {
        QVector a(dim);
        for (auto& x : a) x = rng.rational(-3, 3, 4);
        h.inequalities.push_back({a, exactq::dot(a, u) + rng.rational(0, 1, 5)});
      }
      v = CredalSet::from_hrep(space, t, h);
      std::vector<Row> le = rows_of(h.inequalities), eq{{QVector(dim, Rational(1)), 1}};
      for (std::size_t k = 0; k < dim; ++k) le.push_back({-QVector::unit(dim, k), 0});
      vertices = testing::brute_vertices(dim, le, eq);
    }
    Rational lo = exactq::dot(f, vertices[0]), hi = lo;
    for (const auto& x : vertices) {
      lo = std::min(lo, exactq::dot(f, x));
      hi = std::max(hi, exactq::dot(f, x));
    }
    if (credal::lower_expectation(*v, f) == lo && credal::upper_expectation(*v, f) == hi) ++agree;
  }
  return {agree == n, std::to_string(agree) + "/" + std::to_string(n) + " (set, functional) pairs agree exactly"};
}

Outcome geometry_kernel() {
  RandomRationals rng(5);
  int trips = 0, separations = 0;
  const int n = 35;
  for (int i = 0; i < n; ++i) {
    const std::size_t d = 1 + static_cast<std::size_t>(i % 5);
    const geom::HRep h = testing::random_hrep(rng, d, static_cast<std::size_t>(rng.integer(1, 4)));
    const geom::Polytope original = geom::Polytope::from_hrep(d, h);
    const auto converted = geom::dd_convert(original);
    const auto& verts = converted.vrep().vertices;
    const auto brute = testing::brute_vertices(d, rows_of(h.inequalities), {});
    const geom::Polytope back = geom::Polytope::from_hrep(d, geom::hull_facets(d, verts));
    if (verts == brute && geom::equals(original, back)) ++trips;
    // Separate a few outside points and check the certificates both ways.
    for (int s = 0; s < 3; ++s) {
      QVector x(d);
      for (auto& c : x) c = rng.rational(-1, 3, 5);
      if (testing::satisfies(x, rows_of(h.inequalities), {})) continue;
      const auto cert = geom::separate(original, x);
      ledger.record(geom::verify_certificate(original, cert) && certificate_holds(cert, brute));
      ++separations;
    }
  }
  std::ostringstream d;
  d << trips << "/" << n << " H->V->H round trips (dim 1-5); " << separations << " new separations; "
    << ledger.checked - ledger.failed << "/" << ledger.checked << " certificates in the suite re-verified";
  return {trips == n && separations > 0 && ledger.failed == 0, d.str()};
}

Outcome finite_mode() {
  const ProcessSpace ab({"a", "b"}, {"0", "1"});
  const auto A = IndexTuple::from_labels(ab, {"a"}), B = IndexTuple::from_labels(ab, {"b"});
  const auto AB = IndexTuple::from_labels(ab, {"a", "b"}), BA = IndexTuple::from_labels(ab, {"b", "a"});
  RandomRationals rng(99);
  int agree = 0;
  const int n = 12;
  std::size_t max_sel = 0;
  for (int trial = 0; trial < n; ++trial) {
    const std::vector<QVector> jm{rng.measure(4, 6), rng.measure(4, 6)};
    const std::vector<QVector> ma{testing::brute_pushforward(jm[0], 2, 2, {0}), rng.measure(2, 6)};
    const std::vector<QVector> mb{testing::brute_pushforward(jm[0], 2, 2, {1}),
                                  testing::brute_pushforward(jm[1], 2, 2, {1})};
    const CredalCollection c(ab, {CredalSet::from_members(ab, A, ma), CredalSet::from_members(ab, B, mb),
                                  CredalSet::from_members(ab, AB, jm)});
    const auto j = joint::build_joint(c);
    max_sel = std::max(max_sel, j.selection_count);
    // Exhaustive selections (x, y, v): realizable iff v has marginals x and y.
    std::vector<QVector> ea, eb, eab, eba;
    const auto xs = c.at(A).members(), ys = c.at(B).members(), vs = c.at(AB).members();
    for (const auto& x : xs)
      for (const auto& y : ys)
        for (const auto& v : vs)
          if (testing::brute_pushforward(v, 2, 2, {0}) == x && testing::brute_pushforward(v, 2, 2, {1}) == y) {
            ea.push_back(x);
            eb.push_back(y);
            eab.push_back(v);
            eba.push_back(testing::brute_pushforward(v, 2, 2, {1, 0}));
          }
    if (j.is_empty() || eab.empty()) continue;
    if (testing::same_set(joint::pushforward_joint(j, A).members(), ea) &&
        testing::same_set(joint::pushforward_joint(j, B).members(), eb) &&
        testing::same_set(joint::pushforward_joint(j, AB).members(), eab) &&
        testing::same_set(joint::pushforward_joint(j, BA).members(), eba)) {
      ++agree;
    }
  }
  std::ostringstream d;
  d << agree << "/" << n << " collections match exhaustive selection; at most " << max_sel
    << " selections against a cap of " << joint::JointOptions{}.finite_cap;
  return {agree == n && max_sel <= joint::JointOptions{}.finite_cap, d.str()};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  // Criterion 8 runs last so that it can account for every certificate produced before it.
  const std::vector<Criterion> order{
      {1, "round-trip representation check", round_trip_representation},
      {2, "finite-T shortcut", shortcut},
      {3, "lemma suite", lemmas},
      {4, "necessity direction", necessity},
      {5, "classical degeneration", classical_degeneration},
      {6, "inconsistency diagnosis", inconsistency_diagnosis},
      {7, "oracle equivalence", expectation_oracle},
      {9, "finite mode", finite_mode},
      {8, "geometry kernel", geometry_kernel},
  };
  std::vector<std::pair<int, std::string>> lines;
  bool all = true;
  for (const auto& c : order) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    all = all && o.pass;
    lines.emplace_back(c.id, std::string(o.pass ? "PASS" : "FAIL") + " [" + std::to_string(c.id) + "] " + c.name +
                                 ": " + o.detail);
  }
  std::sort(lines.begin(), lines.end());
  for (const auto& l : lines) std::cout << l.second << "\n";
  return all ? 0 : 1;
}
