// Copyright 2026 The prostar Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "prostar/scene.hpp"

#include <fstream>
#include <sstream>

#include "prostar/error.hpp"

namespace prostar {
namespace {

using nlohmann::json;

[[noreturn]] void parse_error(const std::string& msg) { throw Error(ErrorCode::ParseError, msg); }

[[noreturn]] void reference_error(const std::string& kind, const std::string& name) {
  throw Error(ErrorCode::ReferenceError, "unknown " + kind + " '" + name + "'", {name});
}

const json& member(const json& j, const char* key, const std::string& ctx) {
  if (!j.is_object() || !j.contains(key)) parse_error(ctx + ": missing field '" + key + "'");
  return j.at(key);
}

std::string text(const json& j, const std::string& ctx) {
  if (!j.is_string()) parse_error(ctx + ": expected a string");
  return j.get<std::string>();
}

std::vector<std::string> texts(const json& j, const std::string& ctx) {
  if (!j.is_array()) parse_error(ctx + ": expected an array of strings");
  std::vector<std::string> out;
  for (const auto& e : j) out.push_back(text(e, ctx));
  return out;
}

template <class T>
const T& lookup(const std::map<std::string, T>& m, const std::string& name, const char* kind) {
  auto it = m.find(name);
  if (it == m.end()) reference_error(kind, name);
  return it->second;
}

// Splits "a,b" where both halves must be known labels; labels may contain commas.
std::pair<std::string, std::string> split_pair(const std::string& key,
                                               const std::vector<std::string>& left,
                                               const std::vector<std::string>& right,
                                               const std::string& ctx) {
  auto known = [](const std::vector<std::string>& v, const std::string& s) {
    return std::find(v.begin(), v.end(), s) != v.end();
  };
  for (std::size_t pos = key.find(','); pos != std::string::npos; pos = key.find(',', pos + 1)) {
    std::string a = key.substr(0, pos);
    std::string b = key.substr(pos + 1);
    if (known(left, a) && known(right, b)) return {a, b};
  }
  throw Error(ErrorCode::ReferenceError, ctx + ": key '" + key + "' does not name a known pair",
              {key});
}

std::size_t index_in(const std::vector<std::string>& v, const std::string& s, const char* kind) {
  auto it = std::find(v.begin(), v.end(), s);
  if (it == v.end()) reference_error(kind, s);
  return static_cast<std::size_t>(it - v.begin());
}

const json& section(const json& doc, const char* key) {
  static const json empty = json::object();
  if (!doc.contains(key)) return empty;
  const json& s = doc.at(key);
  if (!s.is_object()) parse_error(std::string("section '") + key + "' must be an object");
  return s;
}

DirectedPoset parse_poset(const json& j, const std::string& ctx) {
  std::vector<std::string> elements = texts(member(j, "elements", ctx), ctx + ".elements");
  std::vector<std::pair<std::string, std::string>> order;
  if (j.contains("leq")) {
    const json& o = j.at("leq");
    if (!o.is_array()) parse_error(ctx + ".leq: expected an array of pairs");
    for (const auto& p : o) {
      if (!p.is_array() || p.size() != 2) parse_error(ctx + ".leq: expected [lower, upper]");
      order.emplace_back(text(p[0], ctx), text(p[1], ctx));
    }
  }
  return validate_poset(std::move(elements), order);
}

}  // namespace

cplx parse_complex(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  parse_error("expected a number or a [re, im] pair");
}

Mat parse_matrix(const json& j) {
  if (!j.is_array()) parse_error("matrix must be an array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (rows == 0) return Mat(0, 0);
  if (!j[0].is_array()) parse_error("matrix must be an array of rows");
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Mat m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      parse_error("matrix rows have different lengths");
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = parse_complex(row[static_cast<std::size_t>(c)]);
  }
  return m;
}

const DirectedPoset& Scene::poset(const std::string& n) const { return lookup(posets, n, "poset"); }
const SpacePtr& Scene::space(const std::string& n) const { return lookup(spaces, n, "space"); }
const LocallyBoundedOperator& Scene::op(const std::string& n) const {
  return lookup(operators, n, "operator");
}
const ConcreteLocallyCStarAlgebra& Scene::algebra(const std::string& n) const {
  return lookup(algebras, n, "algebra");
}
const MatrixProjectiveSystem& Scene::system(const std::string& n) const {
  return lookup(systems, n, "system");
}
const OperatorKernel& Scene::kernel(const std::string& n) const { return lookup(kernels, n, "kernel"); }
const StarSemigroup& Scene::semigroup(const std::string& n) const {
  return lookup(semigroups, n, "semigroup");
}
const NamedAction& Scene::action(const std::string& n) const { return lookup(actions, n, "action"); }
const std::pair<std::string, CpMap>& Scene::cp_map(const std::string& n) const {
  return lookup(cp_maps, n, "cp map");
}
const AbstractHilbertModule& Scene::module(const std::string& n) const {
  return lookup(modules, n, "module");
}
const ConcreteHilbertModule& Scene::concrete_module(const std::string& n) const {
  return lookup(concrete_modules, n, "concrete module");
}

Scene parse_scene(const json& doc, Tolerance tol) {
  if (!doc.is_object()) parse_error("scene must be a JSON object");
  Scene s;

  for (const auto& [name, j] : section(doc, "posets").items())
    s.posets.emplace(name, parse_poset(j, "posets." + name));

  for (const auto& [name, j] : section(doc, "spaces").items()) {
    const std::string ctx = "spaces." + name;
    const json& pj = member(j, "poset", ctx);
    DirectedPoset p = pj.is_string() ? s.poset(pj.get<std::string>()) : parse_poset(pj, ctx + ".poset");
    const json& dj = member(j, "dims", ctx);
    if (!dj.is_object()) parse_error(ctx + ".dims: expected an object");
    std::map<std::string, int> dims;
    for (const auto& [label, d] : dj.items()) {
      if (!d.is_number_integer()) parse_error(ctx + ".dims: expected integers");
      dims[label] = d.get<int>();
    }
    std::map<std::string, Mat> embeddings;
    if (j.contains("embeddings")) {
      const json& ej = j.at("embeddings");
      if (ej.is_string()) {
        if (ej.get<std::string>() != "coordinate")
          parse_error(ctx + ".embeddings: expected \"coordinate\" or an object of matrices");
      } else if (ej.is_object()) {
        for (const auto& [label, m] : ej.items()) embeddings[label] = parse_matrix(m);
      } else {
        parse_error(ctx + ".embeddings: expected \"coordinate\" or an object of matrices");
      }
    }
    s.spaces.emplace(name, make_space(p, dims, embeddings, tol));
  }

  for (const auto& [name, j] : section(doc, "operators").items()) {
    const std::string ctx = "operators." + name;
    const SpacePtr& domain = s.space(text(member(j, "domain", ctx), ctx + ".domain"));
    const SpacePtr& codomain =
        j.contains("codomain") ? s.space(text(j.at("codomain"), ctx + ".codomain")) : domain;
    const DirectedPoset& p = domain->poset();
    if (j.contains("levels")) {
      const json& lj = j.at("levels");
      if (!lj.is_object()) parse_error(ctx + ".levels: expected an object");
      std::vector<Mat> levels(p.size());
      std::vector<bool> seen(p.size(), false);
      for (const auto& [label, m] : lj.items()) {
        const std::size_t i = p.index_of(label);
        levels[i] = parse_matrix(m);
        seen[i] = true;
      }
      for (std::size_t i = 0; i < p.size(); ++i)
        if (!seen[i]) parse_error(ctx + ".levels: missing level " + p.label(i));
      s.operators.emplace(name, check_locally_bounded(domain, codomain, std::move(levels), tol));
    } else if (j.contains("top")) {
      s.operators.emplace(name,
                          LocallyBoundedOperator::from_top(domain, codomain, parse_matrix(j.at("top")), tol));
    } else if (j.contains("scalar")) {
      if (!same_space(domain, codomain)) parse_error(ctx + ": scalar operators need codomain = domain");
      s.operators.emplace(name, scale(parse_complex(j.at("scalar")),
                                      LocallyBoundedOperator::identity(domain)));
    } else {
      parse_error(ctx + ": expected 'levels', 'top' or 'scalar'");
    }
  }

  for (const auto& [name, j] : section(doc, "systems").items()) {
    const std::string ctx = "systems." + name;
    MatrixProjectiveSystem sys{s.poset(text(member(j, "poset", ctx), ctx + ".poset")), {}, {}};
    const json& bj = member(j, "bases", ctx);
    sys.bases.resize(sys.poset.size());
    for (const auto& [label, list] : bj.items()) {
      if (!list.is_array()) parse_error(ctx + ".bases: expected arrays of matrices");
      for (const auto& m : list) sys.bases[sys.poset.index_of(label)].push_back(parse_matrix(m));
    }
    if (j.contains("connecting"))
      for (const auto& [key, m] : j.at("connecting").items()) {
        auto [a, b] = split_pair(key, sys.poset.elements(), sys.poset.elements(), ctx + ".connecting");
        sys.connecting[{sys.poset.index_of(a), sys.poset.index_of(b)}] = parse_matrix(m);
      }
    s.systems.emplace(name, std::move(sys));
  }

  for (const auto& [name, j] : section(doc, "algebras").items()) {
    const std::string ctx = "algebras." + name;
    if (j.contains("system")) {
      s.algebras.emplace(name,
                         gelfand_naimark_rep(s.system(text(j.at("system"), ctx + ".system")), tol).algebra);
      continue;
    }
    const SpacePtr& carrier = s.space(text(member(j, "carrier", ctx), ctx + ".carrier"));
    std::vector<LocallyBoundedOperator> gens;
    for (const auto& g : texts(member(j, "generators", ctx), ctx + ".generators"))
      gens.push_back(s.op(g));
    s.algebras.emplace(name, make_algebra(carrier, std::move(gens), tol));
  }

  for (const auto& [name, j] : section(doc, "kernels").items()) {
    const std::string ctx = "kernels." + name;
    const SpacePtr& space = s.space(text(member(j, "space", ctx), ctx + ".space"));
    std::vector<std::string> points = texts(member(j, "points", ctx), ctx + ".points");
    const std::size_t m = points.size();
    std::vector<std::optional<LocallyBoundedOperator>> table(m * m);
    if (j.contains("scalar")) {
      const Mat c = parse_matrix(j.at("scalar"));
      if (c.rows() != static_cast<Eigen::Index>(m) || c.cols() != static_cast<Eigen::Index>(m))
        parse_error(ctx + ".scalar: expected an m x m matrix");
      const LocallyBoundedOperator id = LocallyBoundedOperator::identity(space);
      for (std::size_t x = 0; x < m; ++x)
        for (std::size_t y = 0; y < m; ++y)
          table[x * m + y] = scale(c(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y)), id);
    } else {
      const json& vj = member(j, "values", ctx);
      if (!vj.is_object()) parse_error(ctx + ".values: expected an object");
      for (const auto& [key, opname] : vj.items()) {
        auto [a, b] = split_pair(key, points, points, ctx + ".values");
        table[index_in(points, a, "point") * m + index_in(points, b, "point")] =
            s.op(text(opname, ctx + ".values"));
      }
    }
    std::vector<LocallyBoundedOperator> values;
    for (std::size_t i = 0; i < table.size(); ++i) {
      if (!table[i])
        parse_error(ctx + ".values: missing entry " + points[i / m] + "," + points[i % m]);
      values.push_back(*table[i]);
    }
    s.kernels.emplace(name, OperatorKernel(std::move(points), space, std::move(values)));
  }

  for (const auto& [name, j] : section(doc, "semigroups").items()) {
    const std::string ctx = "semigroups." + name;
    if (j.contains("cyclic")) {
      if (!j.at("cyclic").is_number_integer()) parse_error(ctx + ".cyclic: expected an integer");
      s.semigroups.emplace(name, StarSemigroup::cyclic(j.at("cyclic").get<std::size_t>()));
      continue;
    }
    std::vector<std::string> elements = texts(member(j, "elements", ctx), ctx + ".elements");
    const json& mj = member(j, "mult", ctx);
    if (!mj.is_array()) parse_error(ctx + ".mult: expected rows of labels");
    std::vector<std::vector<std::size_t>> mult;
    for (const auto& row : mj) {
      mult.emplace_back();
      for (const auto& e : texts(row, ctx + ".mult")) mult.back().push_back(index_in(elements, e, "element"));
    }
    const json& sj = member(j, "star", ctx);
    std::vector<std::size_t> star;
    if (sj.is_array()) {
      for (const auto& e : texts(sj, ctx + ".star")) star.push_back(index_in(elements, e, "element"));
    } else if (sj.is_object()) {
      star.resize(elements.size());
      if (sj.size() != elements.size()) parse_error(ctx + ".star: one entry per element required");
      for (const auto& [k, v] : sj.items())
        star[index_in(elements, k, "element")] = index_in(elements, text(v, ctx + ".star"), "element");
    } else {
      parse_error(ctx + ".star: expected an array or object");
    }
    std::optional<std::size_t> unit;
    if (j.contains("unit")) unit = index_in(elements, text(j.at("unit"), ctx + ".unit"), "element");
    s.semigroups.emplace(name, StarSemigroup(elements, std::move(mult), std::move(star), unit));
  }

  for (const auto& [name, j] : section(doc, "actions").items()) {
    const std::string ctx = "actions." + name;
    const StarSemigroup& sg = s.semigroup(text(member(j, "semigroup", ctx), ctx + ".semigroup"));
    const std::string kname = text(member(j, "kernel", ctx), ctx + ".kernel");
    const std::vector<std::string>& points = s.kernel(kname).points();
    const json& tj = member(j, "table", ctx);
    if (!tj.is_object()) parse_error(ctx + ".table: expected an object");
    std::vector<std::vector<std::size_t>> table(sg.size());
    std::vector<bool> seen(sg.size(), false);
    for (const auto& [el, row] : tj.items()) {
      const std::size_t si = sg.index_of(el);
      seen[si] = true;
      for (const auto& x : texts(row, ctx + ".table")) table[si].push_back(index_in(points, x, "point"));
    }
    for (std::size_t i = 0; i < sg.size(); ++i)
      if (!seen[i]) parse_error(ctx + ".table: missing row for " + sg.label(i));
    s.actions.emplace(name, NamedAction{kname, SemigroupAction(sg, points.size(), std::move(table))});
  }

  for (const auto& [name, j] : section(doc, "cp_maps").items()) {
    const std::string ctx = "cp_maps." + name;
    const std::string aname = text(member(j, "algebra", ctx), ctx + ".algebra");
    const ConcreteLocallyCStarAlgebra& a = s.algebra(aname);
    const SpacePtr& target = s.space(text(member(j, "target", ctx), ctx + ".target"));
    if (j.contains("kraus")) {
      std::vector<LocallyBoundedOperator> kraus;
      for (const auto& c : texts(j.at("kraus"), ctx + ".kraus")) kraus.push_back(s.op(c));
      s.cp_maps.emplace(name, std::make_pair(aname, kraus_map(a, target, kraus)));
      continue;
    }
    const json& ij = member(j, "images", ctx);
    if (!ij.is_object()) parse_error(ctx + ".images: expected an object");
    std::vector<Vec> keys;
    std::vector<LocallyBoundedOperator> values;
    for (const auto& [key, v] : ij.items()) {
      keys.push_back(a.express(s.op(key)));
      values.push_back(s.op(text(v, ctx + ".images")));
    }
    const auto n = static_cast<Eigen::Index>(a.dim());
    Mat e(n, static_cast<Eigen::Index>(keys.size()));
    for (std::size_t k = 0; k < keys.size(); ++k) e.col(static_cast<Eigen::Index>(k)) = keys[k];
    if (e.cols() != n || numerical_rank(e, kRankCutoff * std::max(1.0, spectral_norm(e))) != n)
      throw Error(ErrorCode::PointsNotSpanning, ctx + ": images must be given on a basis of the algebra",
                  {name});
    const Mat inv = e.inverse();
    CpMap phi{target, {}};
    for (Eigen::Index i = 0; i < n; ++i) {
      std::vector<Mat> levels(target->levels());
      for (std::size_t l = 0; l < levels.size(); ++l) {
        levels[l] = Mat::Zero(target->dim(l), target->dim(l));
        for (Eigen::Index k = 0; k < n; ++k) levels[l] += inv(k, i) * values[k].level(l);
      }
      phi.images.emplace_back(target, target, std::move(levels), Tolerance{std::max(tol.scale, 1e-7)});
    }
    s.cp_maps.emplace(name, std::make_pair(aname, std::move(phi)));
  }

  for (const auto& [name, j] : section(doc, "modules").items()) {
    const std::string ctx = "modules." + name;
    const ConcreteLocallyCStarAlgebra& a = s.algebra(text(member(j, "algebra", ctx), ctx + ".algebra"));
    std::vector<std::string> gens = texts(member(j, "generators", ctx), ctx + ".generators");
    const std::size_t m = gens.size();
    AbstractHilbertModule mod{a, gens, std::vector<std::vector<Vec>>(m, std::vector<Vec>(m)), {}};
    std::vector<bool> seen(m * m, false);
    // Elements are given as coefficient vectors over the algebra basis or as operator names.
    auto element = [&](const json& ej, const std::string& where) -> Vec {
      if (!ej.is_array()) return a.express(s.op(text(ej, where)));
      if (ej.size() != a.dim())
        parse_error(where + ": expected " + std::to_string(a.dim()) + " coefficients");
      Vec v(static_cast<Eigen::Index>(a.dim()));
      for (std::size_t t = 0; t < ej.size(); ++t) v(static_cast<Eigen::Index>(t)) = parse_complex(ej[t]);
      return v;
    };
    const json& gj = member(j, "gramian", ctx);
    if (!gj.is_object()) parse_error(ctx + ".gramian: expected an object");
    for (const auto& [key, opname] : gj.items()) {
      auto [e, f] = split_pair(key, gens, gens, ctx + ".gramian");
      const std::size_t i = index_in(gens, e, "generator");
      const std::size_t k = index_in(gens, f, "generator");
      mod.gramian[i][k] = element(opname, ctx + ".gramian");
      seen[i * m + k] = true;
    }
    for (std::size_t i = 0; i < seen.size(); ++i)
      if (!seen[i]) parse_error(ctx + ".gramian: missing entry " + gens[i / m] + "," + gens[i % m]);
    if (j.contains("action")) {
      const json& aj = j.at("action");
      if (!aj.is_array()) parse_error(ctx + ".action: expected an array");
      for (const auto& entry : aj) {
        AbstractHilbertModule::ActionEntry ae;
        ae.generator = index_in(gens, text(member(entry, "generator", ctx), ctx), "generator");
        ae.element = element(member(entry, "element", ctx), ctx + ".action.element");
        ae.result = Vec::Zero(static_cast<Eigen::Index>(m));
        const json& rj = member(entry, "result", ctx);
        if (!rj.is_object()) parse_error(ctx + ".action.result: expected an object");
        for (const auto& [g, c] : rj.items())
          ae.result(static_cast<Eigen::Index>(index_in(gens, g, "generator"))) = parse_complex(c);
        mod.action.push_back(std::move(ae));
      }
    }
    s.modules.emplace(name, std::move(mod));
  }

  for (const auto& [name, j] : section(doc, "concrete_modules").items()) {
    const std::string ctx = "concrete_modules." + name;
    const ConcreteLocallyCStarAlgebra& a = s.algebra(text(member(j, "algebra", ctx), ctx + ".algebra"));
    const SpacePtr& codomain = s.space(text(member(j, "codomain", ctx), ctx + ".codomain"));
    std::vector<LocallyBoundedOperator> elements;
    for (const auto& e : texts(member(j, "elements", ctx), ctx + ".elements")) elements.push_back(s.op(e));
    s.concrete_modules.emplace(name, ConcreteHilbertModule(a, codomain, std::move(elements), tol));
  }

  if (doc.contains("args")) {
    if (!doc.at("args").is_object()) parse_error("section 'args' must be an object");
    s.args = doc.at("args");
  }
  return s;
}

Scene load_scene(const std::string& path, Tolerance tol) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open scene file " + path, {path});
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("malformed JSON: ") + e.what(), {path});
  }
  try {
    return parse_scene(doc, tol);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("unexpected value: ") + e.what(), {path});
  }
}

}  // namespace prostar
