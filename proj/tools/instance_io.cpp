#include "instance_io.hpp"

#include <cmath>

namespace speclift::cli {

namespace {

const Json& field(const Json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) throw FieldError(path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw FieldError(path + "." + key, "missing field");
  return *it;
}

double parse_real(const Json& j, const std::string& path) {
  if (!j.is_number()) throw FieldError(path, "expected a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) throw FieldError(path, "non-finite number");
  return x;
}

std::size_t parse_count(const Json& j, const std::string& path) {
  if (!j.is_number_integer() && !j.is_number_unsigned()) throw FieldError(path, "expected a non-negative integer");
  const auto v = j.get<long long>();
  if (v < 0) throw FieldError(path, "expected a non-negative integer");
  return static_cast<std::size_t>(v);
}

const Json& parse_array(const Json& j, const std::string& path) {
  if (!j.is_array()) throw FieldError(path, "expected an array");
  return j;
}

std::string at(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

std::vector<Complex> parse_complex_list(const Json& j, const std::string& path) {
  std::vector<Complex> out;
  const Json& arr = parse_array(j, path);
  for (std::size_t i = 0; i < arr.size(); ++i) out.push_back(parse_complex(arr[i], at(path, i)));
  return out;
}

std::vector<ComplexMatrix> parse_matrix_list(const Json& j, const std::string& path) {
  const Json& arr = parse_array(j, path);
  std::vector<ComplexMatrix> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const Json& m = parse_array(arr[i], at(path, i));
    out.push_back(parse_matrix(m, m.size(), at(path, i)));
  }
  return out;
}

}  // namespace

Complex parse_complex(const Json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) throw FieldError(path, "expected a complex number as [re, im]");
  return {parse_real(j[0], path + "[0]"), parse_real(j[1], path + "[1]")};
}

ComplexMatrix parse_matrix(const Json& j, std::size_t n, const std::string& path) {
  const Json& rows = parse_array(j, path);
  if (rows.size() != n) throw FieldError(path, "expected " + std::to_string(n) + " rows, found " + std::to_string(rows.size()));
  if (n == 0) throw FieldError(path, "matrix must be at least 1 x 1");
  const auto dim = static_cast<Eigen::Index>(n);
  ComplexMatrix a(dim, dim);
  for (std::size_t r = 0; r < n; ++r) {
    const Json& row = parse_array(rows[r], at(path, r));
    if (row.size() != n) {
      throw FieldError(at(path, r), "expected " + std::to_string(n) + " entries, found " + std::to_string(row.size()));
    }
    for (std::size_t c = 0; c < n; ++c) {
      a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = parse_complex(row[c], at(at(path, r), c));
    }
  }
  return a;
}

InstanceFile parse_instance(const Json& j) {
  if (!j.is_object()) throw FieldError("$", "expected an object");
  const Json& schema = field(j, "schema", "$");
  if (!schema.is_number_integer() || schema.get<int>() != kSchemaVersion) {
    throw FieldError("$.schema", "unsupported schema (expected 1)");
  }
  InstanceFile in;
  in.n = parse_count(field(j, "n", "$"), "$.n");
  if (in.n < 1) throw FieldError("$.n", "dimension must be at least 1");

  const Json& matrices = parse_array(field(j, "matrices", "$"), "$.matrices");
  for (std::size_t i = 0; i < matrices.size(); ++i) in.matrices.push_back(parse_matrix(matrices[i], in.n, at("$.matrices", i)));

  if (j.contains("nodes")) in.nodes = parse_complex_list(j["nodes"], "$.nodes");
  if (in.nodes.size() != 0 && in.nodes.size() != in.matrices.size()) {
    throw FieldError("$.nodes", "expected one node per matrix (" + std::to_string(in.matrices.size()) + ")");
  }
  for (std::size_t i = 0; i < in.nodes.size(); ++i) {
    for (std::size_t k = 0; k < i; ++k) {
      if (in.nodes[i] == in.nodes[k]) {
        throw Error(ErrorCode::NodeCollision, at("$.nodes", i) + ": duplicates " + at("$.nodes", k));
      }
    }
  }

  if (j.contains("f")) {
    const Json& f = parse_array(j["f"], "$.f");
    if (f.size() != in.n) throw FieldError("$.f", "expected n = " + std::to_string(in.n) + " components");
    for (std::size_t i = 0; i < f.size(); ++i) {
      auto coeffs = parse_complex_list(f[i], at("$.f", i));
      if (coeffs.empty() || coeffs.size() > kMaxPolynomialDegree + 1) {
        throw FieldError(at("$.f", i), "expected 1 to " + std::to_string(kMaxPolynomialDegree + 1) + " coefficients");
      }
      in.f.push_back(std::move(coeffs));
    }
  }

  if (j.contains("tolerances")) {
    const Json& t = j["tolerances"];
    if (!t.is_object()) throw FieldError("$.tolerances", "expected an object");
    auto read = [&](const char* key, double& slot) {
      if (!t.contains(key)) return;
      slot = parse_real(t[key], std::string("$.tolerances.") + key);
      if (!(slot > 0.0)) throw FieldError(std::string("$.tolerances.") + key, "must be positive");
    };
    read("rank_tol", in.tolerances.rank_tol);
    read("cluster_tol", in.tolerances.cluster_tol);
    read("verify_tol", in.tolerances.verify_tol);
    read("vanishing_tol", in.tolerances.vanishing_tol);
  }
  if (j.contains("reading")) {
    if (!j["reading"].is_string()) throw FieldError("$.reading", "expected \"grouped\" or \"per-block\"");
    try {
      in.reading = parse_block_reading(j["reading"].get<std::string>());
    } catch (const Error&) {
      throw FieldError("$.reading", "expected \"grouped\" or \"per-block\"");
    }
  }
  return in;
}

HoloMatrixMap parse_lifting(const Json& j, const std::string& path) {
  const std::string kind = field(j, "kind", path).is_string() ? j["kind"].get<std::string>() : "";
  if (kind == "polynomial_matrix") {
    PolynomialMatrix p;
    p.coeffs = parse_matrix_list(field(j, "coefficients", path), path + ".coefficients");
    if (p.coeffs.empty()) throw FieldError(path + ".coefficients", "expected at least one coefficient");
    for (std::size_t i = 1; i < p.coeffs.size(); ++i) {
      if (p.coeffs[i].rows() != p.coeffs[0].rows()) throw FieldError(at(path + ".coefficients", i), "dimension differs");
    }
    return p;
  }
  if (kind != "conjugated_companion") throw FieldError(path + ".kind", "expected \"polynomial_matrix\" or \"conjugated_companion\"");
  ConjugatedCompanion map;
  map.center = parse_complex(field(j, "center", path), path + ".center");
  const Json& f = parse_array(field(j, "f", path), path + ".f");
  for (std::size_t i = 0; i < f.size(); ++i) map.f.push_back(parse_complex_list(f[i], at(path + ".f", i)));
  const std::size_t n = map.f.size();
  if (n < 1) throw FieldError(path + ".f", "expected at least one component");
  const std::string cpath = path + ".conjugator";
  const Json& c = field(j, "conjugator", path);
  const std::string ckind = field(c, "kind", cpath).is_string() ? c["kind"].get<std::string>() : "";
  if (ckind == "constant") {
    const ComplexMatrix s = parse_matrix(field(c, "s", cpath), n, cpath + ".s");
    const ComplexMatrix s_inv = parse_matrix(field(c, "s_inv", cpath), n, cpath + ".s_inv");
    map.conjugator = ConstantConjugator{s, s_inv};
  } else if (ckind == "exp_interpolant") {
    std::vector<Complex> nodes = parse_complex_list(field(c, "nodes", cpath), cpath + ".nodes");
    const Json& values = parse_array(field(c, "values", cpath), cpath + ".values");
    if (values.size() != nodes.size() || nodes.empty()) throw FieldError(cpath + ".values", "expected one value per node");
    std::vector<ComplexMatrix> logs;
    for (std::size_t i = 0; i < values.size(); ++i) logs.push_back(parse_matrix(values[i], n, at(cpath + ".values", i)));
    map.conjugator = ExpConjugator{MatrixInterpolant(std::move(nodes), std::move(logs))};
  } else {
    throw FieldError(cpath + ".kind", "expected \"constant\" or \"exp_interpolant\"");
  }
  return map;
}

Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json to_json(const ComplexMatrix& a) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < a.cols(); ++c) row.push_back(to_json(Complex{a(r, c)}));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json to_json(const std::vector<Complex>& v) {
  Json out = Json::array();
  for (const Complex& z : v) out.push_back(to_json(z));
  return out;
}

Json to_json(const SymPoint& y) { return to_json(y.y); }

Json to_json(const Membership& m) {
  return Json{{"inside", m.inside}, {"margin", m.margin}, {"boundary", m.boundary}};
}

Json to_json(const ToleranceConfig& t) {
  return Json{{"rank_tol", t.rank_tol},
              {"cluster_tol", t.cluster_tol},
              {"verify_tol", t.verify_tol},
              {"vanishing_tol", t.vanishing_tol}};
}

Json to_json(const JordanStructure& s) {
  Json clusters = Json::array();
  for (const auto& c : s.clusters) {
    clusters.push_back(Json{{"eigenvalue", to_json(c.cluster.value)},
                            {"multiplicity", c.cluster.multiplicity},
                            {"partition", c.partition}});
  }
  return Json{{"dim", s.dim()}, {"cyclic", is_cyclic(s)}, {"clusters", std::move(clusters)}};
}

namespace {

Json observed_json(const std::optional<std::size_t>& observed, std::size_t truncation) {
  if (observed) return *observed;
  return Json{{"at_least", truncation}};
}

}  // namespace

Json to_json(const LocalReport& r, std::size_t node) {
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    rows.push_back(Json{{"cluster", row.cluster},
                        {"eigenvalue", to_json(r.structure.clusters.at(row.cluster).cluster.value)},
                        {"block", row.block},
                        {"k", row.k},
                        {"required", row.required},
                        {"observed", observed_json(row.observed, r.truncation)},
                        {"pass", row.pass}});
  }
  Json out{{"node", node},
           {"consistent", r.consistent},
           {"consistency_residual", r.consistency_residual},
           {"reading", to_string(r.reading)},
           {"truncation", r.truncation}};
  if (r.consistent) out["structure"] = to_json(r.structure);
  out["rows"] = std::move(rows);
  out["pass"] = r.pass;
  return out;
}

Json to_json(const GlobalVerdict& v) {
  Json nodes = Json::array();
  Json failures = Json::array();
  for (std::size_t j = 0; j < v.nodes.size(); ++j) {
    const LocalReport& r = v.nodes[j];
    nodes.push_back(to_json(r, j));
    if (!r.consistent) failures.push_back(Json{{"node", j}, {"reason", "f(node) differs from pi(matrix)"}});
    for (const auto& row : r.rows) {
      if (row.pass) continue;
      failures.push_back(Json{{"node", j},
                              {"eigenvalue", to_json(r.structure.clusters.at(row.cluster).cluster.value)},
                              {"k", row.k},
                              {"required", row.required},
                              {"observed", observed_json(row.observed, r.truncation)}});
    }
  }
  return Json{{"verdict", v.solvable ? "solvable" : "not solvable"},
              {"solvable", v.solvable},
              {"failures", std::move(failures)},
              {"warnings", v.warnings},
              {"truncation", v.truncation},
              {"nodes", std::move(nodes)}};
}

Json to_json(const HoloMatrixMap& map) {
  if (const auto* p = std::get_if<PolynomialMatrix>(&map)) {
    Json coeffs = Json::array();
    for (const auto& c : p->coeffs) coeffs.push_back(to_json(c));
    return Json{{"kind", "polynomial_matrix"}, {"coefficients", std::move(coeffs)}};
  }
  const auto& cc = std::get<ConjugatedCompanion>(map);
  Json f = Json::array();
  for (const auto& component : cc.f) f.push_back(to_json(component));
  Json conj;
  if (const auto* s = std::get_if<ConstantConjugator>(&cc.conjugator)) {
    conj = Json{{"kind", "constant"}, {"s", to_json(s->s)}, {"s_inv", to_json(s->s_inv)}};
  } else {
    const auto& g = std::get<ExpConjugator>(cc.conjugator).generator;
    Json values = Json::array();
    for (const auto& v : g.values()) values.push_back(to_json(v));
    conj = Json{{"kind", "exp_interpolant"}, {"nodes", to_json(g.nodes())}, {"values", std::move(values)}};
  }
  return Json{{"kind", "conjugated_companion"}, {"center", to_json(cc.center)}, {"f", std::move(f)}, {"conjugator", std::move(conj)}};
}

Json to_json(const LiftVerification& v) {
  return Json{{"pass", v.pass},
              {"tol", v.tol},
              {"node_residual", v.node_residual},
              {"projection_residual", v.projection_residual},
              {"all_in_ball", v.all_in_ball},
              {"min_ball_margin", v.min_ball_margin},
              {"samples", v.samples},
              {"sample_radius", v.sample_radius}};
}

Json to_json(const LinePath& p) {
  Json factors = Json::array();
  for (const auto& n : p.factors) {
    for (Eigen::Index r = 0; r < n.rows(); ++r) {
      for (Eigen::Index c = 0; c < n.cols(); ++c) {
        if (n(r, c) != Complex{0.0}) factors.push_back(Json{{"row", r}, {"col", c}, {"value", to_json(Complex{n(r, c)})}});
      }
    }
  }
  return Json{{"mu", to_json(p.mu)}, {"factor_count", p.factors.size()}, {"factors", std::move(factors)}};
}

}  // namespace speclift::cli
