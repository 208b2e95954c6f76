#include "caloronkit/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace caloronkit {

namespace {

json complex_array(const std::vector<cplx>& v) {
  json out = json::array();
  for (const cplx& z : v) out.push_back({z.real(), z.imag()});
  return out;
}

std::vector<cplx> complex_array_from(const json& j) {
  std::vector<cplx> out;
  out.reserve(j.size());
  for (const auto& e : j) out.emplace_back(e.at(0).get<double>(), e.at(1).get<double>());
  return out;
}

std::string index_key(const std::vector<int>& I) {
  std::string k;
  for (size_t i = 0; i < I.size(); ++i) {
    if (i) k += ",";
    k += std::to_string(I[i]);
  }
  return k;
}

}  // namespace

json grid_to_json(const Grid& g) {
  json factors = json::array();
  for (const auto& f : g.factors()) {
    switch (f.kind) {
      case FactorSpec::Kind::Circle:
        factors.push_back({{"kind", "circle"}, {"n", f.n}});
        break;
      case FactorSpec::Kind::Interval:
        factors.push_back({{"kind", "interval"}, {"n", f.n}, {"a", f.a}, {"b", f.b}});
        break;
      case FactorSpec::Kind::Sphere3:
        factors.push_back({{"kind", "sphere3"},
                           {"n_psi", f.n_psi},
                           {"n_theta", f.n_theta},
                           {"n_phi", f.n_phi}});
        break;
    }
  }
  json j{{"factors", factors}};
  if (g.distinguished_factor())
    j["distinguished_circle"] = *g.distinguished_factor();
  else
    j["distinguished_circle"] = nullptr;
  return j;
}

GridPtr grid_from_json(const json& j) {
  std::vector<FactorSpec> factors;
  for (const auto& f : j.at("factors")) {
    std::string kind = f.at("kind").get<std::string>();
    if (kind == "circle") {
      factors.push_back(FactorSpec::circle(f.at("n").get<int>()));
    } else if (kind == "interval") {
      factors.push_back(FactorSpec::interval(f.at("n").get<int>(), f.at("a").get<double>(),
                                             f.at("b").get<double>()));
    } else if (kind == "sphere3") {
      factors.push_back(FactorSpec::sphere3(f.at("n_psi").get<int>(), f.at("n_theta").get<int>(),
                                            f.at("n_phi").get<int>()));
    } else {
      throw std::invalid_argument("grid json: unknown factor kind '" + kind + "'");
    }
  }
  std::optional<int> dist;
  if (j.contains("distinguished_circle") && !j.at("distinguished_circle").is_null())
    dist = j.at("distinguished_circle").get<int>();
  return Grid::make(std::move(factors), dist);
}

json form_to_json(const MatrixForm& f) {
  json coeffs = json::object();
  auto Is = combinations(f.grid()->dim(), f.degree());
  for (size_t i = 0; i < Is.size(); ++i)
    coeffs[index_key(Is[i])] = complex_array(f.coeff(static_cast<int>(i)));
  return json{{"grid", grid_to_json(*f.grid())},
              {"degree", f.degree()},
              {"rank", f.rank()},
              {"coeffs", coeffs}};
}

MatrixForm form_from_json(const json& j) {
  GridPtr g = grid_from_json(j.at("grid"));
  int degree = j.at("degree").get<int>();
  int rank = j.at("rank").get<int>();
  MatrixForm f = MatrixForm::zero(g, degree, rank);
  auto Is = combinations(g->dim(), degree);
  const auto& coeffs = j.at("coeffs");
  for (size_t i = 0; i < Is.size(); ++i) {
    std::string key = index_key(Is[i]);
    if (!coeffs.contains(key)) continue;
    auto vals = complex_array_from(coeffs.at(key));
    if (vals.size() != f.coeff(static_cast<int>(i)).size())
      throw std::invalid_argument("form json: coefficient '" + key + "' has wrong length");
    f.coeff(static_cast<int>(i)) = std::move(vals);
  }
  return f;
}

json map_to_json(const GroupMap& g) {
  return json{{"grid", grid_to_json(*g.grid())},
              {"rank", g.rank()},
              {"values", complex_array(g.values())},
              {"unitary", g.unitary()},
              {"based", g.based()}};
}

GroupMap map_from_json(const json& j) {
  GridPtr g = grid_from_json(j.at("grid"));
  return GroupMap::from_values(g, j.at("rank").get<int>(), complex_array_from(j.at("values")),
                               j.at("unitary").get<bool>(), j.at("based").get<bool>());
}

json pair_to_json(const ConnectionPair& p) {
  return json{{"A", form_to_json(p.A)}, {"Phi", form_to_json(p.Phi)}, {"unitary", p.unitary}};
}

ConnectionPair pair_from_json(const json& j) {
  return ConnectionPair::make(form_from_json(j.at("A")), form_from_json(j.at("Phi")),
                              j.at("unitary").get<bool>());
}

json framed_to_json(const FramedConnection& f) {
  return json{{"a", form_to_json(f.a)}, {"unitary", f.unitary}};
}

FramedConnection framed_from_json(const json& j) {
  return FramedConnection::make(form_from_json(j.at("a")), j.at("unitary").get<bool>());
}

json graded_to_json(const GradedForm& f) {
  json terms = json::object();
  for (const auto& [deg, t] : f.terms) terms[std::to_string(deg)] = form_to_json(t);
  return json{{"parity", f.parity == Parity::Even ? "even" : "odd"}, {"terms", terms}};
}

GradedForm graded_from_json(const json& j) {
  std::string par = j.at("parity").get<std::string>();
  GradedForm out;
  out.parity = (par == "even") ? Parity::Even : Parity::Odd;
  for (const auto& [key, val] : j.at("terms").items()) {
    MatrixForm f = form_from_json(val);
    out.grid = f.grid();
    out.terms.emplace(std::stoi(key), std::move(f));
  }
  if (!out.grid) throw std::invalid_argument("graded json: no terms");
  return out;
}

json report_to_json(const EquivalenceReport& r) {
  json per = json::array();
  for (const auto& d : r.per_degree) {
    json row{{"degree", d.degree},
             {"closedness", d.closedness},
             {"worst_period", d.worst_period},
             {"cycle", d.worst_cycle},
             {"exact", d.exact},
             {"supported", d.supported}};
    per.push_back(row);
  }
  std::string verdict = r.verdict == Verdict::Equivalent
                            ? "equivalent"
                            : (r.verdict == Verdict::Inequivalent ? "inequivalent"
                                                                  : "unsupported-domain");
  json extras = json::object();
  for (const auto& [k, v] : r.extras) extras[k] = v;
  return json{{"schema_version", 1},
              {"verdict", verdict},
              {"per_degree", per},
              {"params", {{"cutoff", r.cutoff}, {"tol", r.tol}, {"grid", r.grid}}},
              {"extras", extras}};
}

void write_json_file(const std::string& path, const json& j) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open for writing: " + tmp);
    os << j.dump(1, '\t') << "\n";
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("cannot rename into place: " + path);
}

json read_json_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open: " + path);
  json j;
  is >> j;
  return j;
}

GridPtr parse_grid_spec(const std::string& spec) {
  if (spec.find(".json") != std::string::npos) return grid_from_json(read_json_file(spec));
  std::vector<FactorSpec> factors;
  std::optional<int> dist;
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, 'x')) {
    if (tok.empty()) throw std::invalid_argument("grid spec: empty token");
    if (tok.rfind("sph", 0) == 0) {
      // sph<P>:<T>:<F>
      int P, T, F;
      if (std::sscanf(tok.c_str(), "sph%d:%d:%d", &P, &T, &F) != 3)
        throw std::invalid_argument("grid spec: bad sphere token '" + tok + "'");
      factors.push_back(FactorSpec::sphere3(P, T, F));
      continue;
    }
    if (tok[0] == 'i') {
      int n;
      double a = 0.0, b = 1.0;
      if (std::sscanf(tok.c_str(), "i%d:%lf:%lf", &n, &a, &b) >= 1)
        factors.push_back(FactorSpec::interval(n, a, b));
      else
        throw std::invalid_argument("grid spec: bad interval token '" + tok + "'");
      continue;
    }
    bool marked = false;
    if (tok.size() > 2 && tok.substr(tok.size() - 2) == "s1") {
      marked = true;
      tok = tok.substr(0, tok.size() - 2);
    }
    factors.push_back(FactorSpec::circle(std::stoi(tok)));
    if (marked) dist = static_cast<int>(factors.size()) - 1;
  }
  return Grid::make(std::move(factors), dist);
}

}  // namespace caloronkit
