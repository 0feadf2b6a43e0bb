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

#include "prostar/commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>

#include "prostar/error.hpp"
#include "prostar/scene.hpp"

namespace prostar {
namespace {

using nlohmann::json;

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

json vector_json(const Vec& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_json(v(i)));
  return out;
}

json dims_json(const LocallyHilbertSpace& s) {
  json out = json::object();
  for (std::size_t i = 0; i < s.levels(); ++i) out[s.poset().label(i)] = s.dim(i);
  return out;
}

json error_json(const Error& e) {
  json out = {{"code", std::string(to_string(e.code()))}, {"message", e.what()}, {"where", e.where()}};
  if (!std::isnan(e.residual())) out["residual"] = e.residual();
  if (e.witness().size() > 0) out["witness"] = vector_json(e.witness());
  return out;
}

class Checks {
 public:
  void residual(const std::string& name, double value, double limit) {
    const bool pass = value <= limit;
    ok_ = ok_ && pass;
    list_.push_back({{"name", name}, {"residual", value}, {"limit", limit}, {"pass", pass}});
  }
  void flag(const std::string& name, bool pass) {
    ok_ = ok_ && pass;
    list_.push_back({{"name", name}, {"pass", pass}});
  }
  bool ok() const { return ok_; }
  const json& list() const { return list_; }

 private:
  json list_ = json::array();
  bool ok_ = true;
};

struct Context {
  const Scene& scene;
  const json& args;
  Tolerance tol;
  Checks& checks;
};

// Name from args[key], or the only entry of `pool` when the key is absent.
template <class Map>
std::string pick(const Context& c, const char* key, const Map& pool, const char* kind) {
  if (c.args.contains(key)) {
    if (!c.args.at(key).is_string())
      throw Error(ErrorCode::ParseError, std::string("argument '") + key + "' must be a name");
    return c.args.at(key).get<std::string>();
  }
  if (pool.size() == 1) return pool.begin()->first;
  throw Error(ErrorCode::ParseError,
              std::string("argument '") + key + "' is required: scene has " +
                  std::to_string(pool.size()) + " " + kind + "s");
}

bool flag_arg(const Context& c, const char* key) {
  if (!c.args.contains(key)) return false;
  if (!c.args.at(key).is_boolean())
    throw Error(ErrorCode::ParseError, std::string("argument '") + key + "' must be a boolean");
  return c.args.at(key).get<bool>();
}

double op_scale(const LocallyBoundedOperator& t) {
  double m = 0.0;
  for (const auto& l : t.levels()) m = std::max(m, max_abs(l));
  return m;
}

json validate(const Context& c) {
  const Scene& s = c.scene;
  json out = json::object();
  for (const auto& [name, p] : s.posets)
    out["posets"][name] = {{"elements", p.size()}, {"maximum", maximum(p)}};
  for (const auto& [name, sp] : s.spaces) {
    const double r = sp->transitivity_residual();
    out["spaces"][name] = {{"dims", dims_json(*sp)}, {"transitivity_residual", r}};
    c.checks.residual("space " + name + " transitivity", r, c.tol.of(1.0));
  }
  for (const auto& [name, t] : s.operators) {
    const CoherenceReport& r = t.coherence();
    out["operators"][name] = {{"coherence", r.coherence}, {"adjoint_coherence", r.adjoint_coherence}};
    c.checks.residual("operator " + name + " coherence", r.worst(), c.tol.of(op_scale(t)));
  }
  for (const auto& [name, a] : s.algebras) {
    const double r = a.structure_residual();
    out["algebras"][name] = {
        {"dim", a.dim()}, {"unital", a.unit().has_value()}, {"structure_residual", r}};
    c.checks.residual("algebra " + name + " structure constants", r, 1e-8);
  }
  for (const auto& [name, k] : s.kernels)
    out["kernels"][name] = {{"points", k.points()},
                            {"hermitian", is_hermitian(k, c.tol)},
                            {"positive_semidefinite", is_positive_semidefinite(k, c.tol)}};
  for (const auto& [name, sg] : s.semigroups)
    out["semigroups"][name] = {{"elements", sg.elements()}, {"group", sg.is_group()}};
  for (const auto& [name, a] : s.actions) {
    const OperatorKernel& k = s.kernel(a.kernel);
    out["actions"][name] = {{"kernel", a.kernel},
                            {"invariant", is_invariant(k, a.action, c.tol)},
                            {"invariance_residual", invariance_residual(k, a.action)}};
  }
  for (const auto& [name, m] : s.modules) {
    const ModuleReport r = check_module(m, c.tol);
    out["modules"][name] = {{"hermitian_residual", r.hermitian_residual},
                            {"compatibility_residual", r.compatibility_residual},
                            {"definite", r.definite},
                            {"undefined_actions", r.undefined_actions.size()}};
  }
  for (const auto& [name, m] : s.concrete_modules)
    out["concrete_modules"][name] = {{"elements", m.size()}, {"algebra_dim", m.algebra().dim()}};
  return out;
}

json decomposition_json(const KolmogorovDecomposition& d) {
  json spans = json::object();
  const std::vector<int> ranks = d.spanning_ranks();
  for (std::size_t i = 0; i < ranks.size(); ++i) spans[d.space->poset().label(i)] = ranks[i];
  return {{"points", d.points},
          {"dims", dims_json(*d.dilation_space)},
          {"rank", d.dilation_space->ambient_dim()},
          {"spanning_ranks", spans},
          {"minimal", d.minimal}};
}

json dilate(const Context& c) {
  const Scene& s = c.scene;
  KolmogorovOptions opts{flag_arg(c, "reversed")};
  const bool use_action = c.args.contains("action") || (!c.args.contains("kernel") && !s.actions.empty());
  if (!use_action) {
    const std::string kname = pick(c, "kernel", s.kernels, "kernel");
    const OperatorKernel& k = s.kernel(kname);
    const KolmogorovDecomposition d = kolmogorov(k, opts, c.tol);
    json out = decomposition_json(d);
    out["kernel"] = kname;
    double coh = 0.0;
    for (const auto& v : d.V) coh = std::max(coh, v.coherence().worst());
    out["residuals"] = {{"factorization", d.residual}, {"coherence", coh}};
    c.checks.residual("factorization", d.residual, c.tol.of(d.gram_norm));
    c.checks.residual("coherence", coh, c.tol.of(d.gram_norm));
    c.checks.flag("minimal", d.minimal);
    return out;
  }
  const std::string aname = pick(c, "action", s.actions, "action");
  const NamedAction& na = s.action(aname);
  const OperatorKernel& k = s.kernel(na.kernel);
  const InvariantDilation dil = invariant_dilation(k, na.action, opts, c.tol);
  const KolmogorovDecomposition& d = dil.decomposition;
  json out = decomposition_json(d);
  out["kernel"] = na.kernel;
  out["action"] = aname;
  const StarSemigroup& sg = na.action.semigroup();
  json certs = json::object();
  for (std::size_t i = 0; i < sg.size(); ++i)
    for (std::size_t l = 0; l < k.poset().size(); ++l)
      certs[sg.label(i)][k.poset().label(l)] = dil.certificates[i][l];
  out["certificates"] = certs;
  out["residuals"] = {{"factorization", d.residual},
                      {"representation", dil.representation_residual},
                      {"star", dil.star_residual},
                      {"intertwining", dil.intertwining_residual},
                      {"coherence", dil.coherence_residual}};
  const double limit = c.tol.of(d.gram_norm);
  c.checks.residual("factorization", d.residual, limit);
  c.checks.residual("representation", dil.representation_residual, limit);
  c.checks.residual("star", dil.star_residual, limit);
  c.checks.residual("intertwining", dil.intertwining_residual, limit);
  c.checks.residual("coherence", dil.coherence_residual, limit);
  c.checks.flag("minimal", d.minimal);
  out["group"] = sg.is_group();
  if (sg.is_group()) {
    bool unitary = true;
    for (const auto& p : dil.pi) unitary = unitary && is_locally_unitary(p, Tolerance{std::max(c.tol.scale, 1e-8)});
    c.checks.flag("locally unitary", unitary);
  }
  return out;
}

json represent(const Context& c) {
  const Scene& s = c.scene;
  const std::string name = pick(c, "system", s.systems, "system");
  const GelfandNaimarkRep rep = gelfand_naimark_rep(s.system(name), c.tol);
  json faithful = json::object();
  for (std::size_t i = 0; i < rep.report.faithful.size(); ++i)
    faithful[rep.space->poset().label(i)] = static_cast<bool>(rep.report.faithful[i]);
  double coh = 0.0;
  for (const auto& t : rep.images) coh = std::max(coh, t.coherence().worst());
  json out = {{"system", name},
              {"dims", dims_json(*rep.space)},
              {"algebra_dim", rep.algebra.dim()},
              {"faithful", faithful},
              {"residuals",
               {{"multiplicativity", rep.report.multiplicativity},
                {"star", rep.report.star},
                {"coherence", rep.report.coherence},
                {"image_coherence", coh}}}};
  c.checks.residual("multiplicativity", rep.report.multiplicativity, c.tol.of(1.0));
  c.checks.residual("star", rep.report.star, c.tol.of(1.0));
  c.checks.residual("coherence", rep.report.coherence, c.tol.of(1.0));
  c.checks.residual("image coherence", coh, c.tol.of(1.0));
  c.checks.flag("faithful", rep.report.all_faithful());
  return out;
}

json stinespring_cmd(const Context& c) {
  const Scene& s = c.scene;
  const std::string name = pick(c, "cp_map", s.cp_maps, "cp map");
  const auto& [aname, phi] = s.cp_map(name);
  const ConcreteLocallyCStarAlgebra& a = s.algebra(aname);
  const StinespringDilation st = stinespring(a, phi, {flag_arg(c, "reversed")}, c.tol);
  json out = decomposition_json(st.decomposition);
  out.erase("points");
  out["cp_map"] = name;
  out["algebra"] = aname;
  out["algebra_dim"] = a.dim();
  json certs = json::object();
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t l = 0; l < a.poset().size(); ++l)
      certs["b" + std::to_string(i)][a.poset().label(l)] = st.certificates[i][l];
  out["certificates"] = certs;
  out["orbit"] = {{"size", st.orbit_size}, {"complete", st.orbit_complete}};
  out["residuals"] = {{"reproduction", st.reproduction_residual},
                      {"multiplicativity", st.multiplicativity_residual},
                      {"star", st.star_residual},
                      {"unit", st.unit_residual},
                      {"invariance", st.invariance_residual},
                      {"coherence", st.coherence_residual},
                      {"factorization", st.decomposition.residual}};
  const double limit = c.tol.of(st.decomposition.gram_norm);
  c.checks.residual("reproduction", st.reproduction_residual, limit);
  c.checks.residual("multiplicativity", st.multiplicativity_residual, limit);
  c.checks.residual("star", st.star_residual, limit);
  c.checks.residual("unit", st.unit_residual, limit);
  c.checks.residual("invariance", st.invariance_residual, limit);
  c.checks.residual("coherence", st.coherence_residual, limit);
  c.checks.residual("factorization", st.decomposition.residual, limit);
  return out;
}

json tensor(const Context& c) {
  const Scene& s = c.scene;
  if (!c.args.contains("left") || !c.args.contains("right"))
    throw Error(ErrorCode::ParseError, "tensor needs 'left' and 'right' algebras");
  const std::string ln = pick(c, "left", s.algebras, "algebra");
  const std::string rn = pick(c, "right", s.algebras, "algebra");
  const ConcreteLocallyCStarAlgebra& a = s.algebra(ln);
  const ConcreteLocallyCStarAlgebra& b = s.algebra(rn);
  const ConcreteLocallyCStarAlgebra t = spatial_tensor(a, b, c.tol);
  double cross = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < b.dim(); ++j)
      cross = std::max(cross, cross_seminorm_residual(a, b, a.structure().unit_vector(i),
                                                      b.structure().unit_vector(j)));
  double coh = 0.0;
  for (const auto& x : t.basis()) coh = std::max(coh, x.coherence().worst());
  json out = {{"left", ln},
              {"right", rn},
              {"dims", dims_json(*t.carrier())},
              {"algebra_dim", t.dim()},
              {"expected_dim", a.dim() * b.dim()},
              {"residuals",
               {{"cross_seminorm", cross}, {"coherence", coh}, {"structure", t.structure_residual()}}}};
  c.checks.flag("dimension", t.dim() == a.dim() * b.dim());
  c.checks.residual("cross seminorm", cross, c.tol.of(1.0));
  c.checks.residual("coherence", coh, c.tol.of(1.0));
  c.checks.residual("structure", t.structure_residual(), 1e-8);
  return out;
}

json module_embed(const Context& c) {
  const Scene& s = c.scene;
  const std::string name = pick(c, "module", s.modules, "module");
  const AbstractHilbertModule& m = s.module(name);
  const OperatorModel om = operator_model(m, c.tol);
  json undefined = json::array();
  for (auto [g, k] : om.module.undefined_actions)
    undefined.push_back({m.generators[g], "b" + std::to_string(k)});
  double coh = 0.0;
  for (const auto& p : om.phi) coh = std::max(coh, p.coherence().worst());
  json out = decomposition_json(om.decomposition);
  out.erase("points");
  out["module"] = name;
  out["generators"] = m.generators;
  out["definite"] = om.module.definite;
  out["gram_rank"] = om.gram_rank;
  out["image_rank"] = om.image_rank;
  out["undefined_actions"] = undefined;
  out["residuals"] = {{"gramian", om.gramian_residual},
                      {"action", om.action_residual},
                      {"hermitian", om.module.hermitian_residual},
                      {"compatibility", om.module.compatibility_residual},
                      {"coherence", coh}};
  const double limit = c.tol.of(om.decomposition.gram_norm);
  c.checks.residual("gramian", om.gramian_residual, limit);
  c.checks.residual("action", om.action_residual, limit);
  c.checks.residual("coherence", coh, limit);
  c.checks.flag("rank", om.gram_rank == om.image_rank);
  return out;
}

json module_tensor(const Context& c) {
  const Scene& s = c.scene;
  if (!c.args.contains("left") || !c.args.contains("right"))
    throw Error(ErrorCode::ParseError, "module-tensor needs 'left' and 'right' modules");
  const std::string ln = pick(c, "left", s.concrete_modules, "concrete module");
  const std::string rn = pick(c, "right", s.concrete_modules, "concrete module");
  const ConcreteHilbertModule& e = s.concrete_module(ln);
  const ConcreteHilbertModule& f = s.concrete_module(rn);
  const ExteriorTensor t = exterior_tensor(e, f, c.tol);
  double action = 0.0;
  for (const auto& x : e.elements())
    for (const auto& y : f.elements())
      for (const auto& a : e.algebra().basis())
        for (const auto& b : f.algebra().basis())
          action = std::max(action, right_action_residual(x, y, a, b));
  double coh = 0.0;
  for (const auto& x : t.module.elements()) coh = std::max(coh, x.coherence().worst());
  json out = {{"left", ln},
              {"right", rn},
              {"elements", t.module.size()},
              {"algebra_dim", t.module.algebra().dim()},
              {"domain_dims", dims_json(*t.module.domain())},
              {"codomain_dims", dims_json(*t.module.codomain())},
              {"residuals", {{"gramian", t.gramian_residual}, {"right_action", action}, {"coherence", coh}}}};
  c.checks.residual("gramian", t.gramian_residual, c.tol.of(1.0));
  c.checks.residual("right action", action, c.tol.of(1.0));
  c.checks.residual("coherence", coh, c.tol.of(1.0));
  return out;
}

using Handler = std::function<json(const Context&)>;

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> h = {
      {"validate", validate},         {"dilate", dilate},
      {"represent", represent},       {"stinespring", stinespring_cmd},
      {"tensor", tensor},             {"module-embed", module_embed},
      {"module-tensor", module_tensor}};
  return h;
}

int exit_code_for(ErrorCode code) {
  return code == ErrorCode::ParseError || code == ErrorCode::ReferenceError ? 2 : 1;
}

CommandResult run(const std::string& command, const std::function<Scene(Tolerance)>& load,
                  const json& echo, const CommandOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  CommandResult r;
  r.report = {{"schema", 1}, {"command", command}, {"tolerance", options.tol}};
  r.report.update(echo);
  try {
    auto it = handlers().find(command);
    if (it == handlers().end())
      throw Error(ErrorCode::ParseError, "unknown command '" + command + "'", {command});
    if (!(options.tol > 0.0)) throw Error(ErrorCode::ParseError, "tolerance must be positive");
    const Tolerance tol{options.tol};
    const Scene scene = load(tol);
    static const json no_args = json::object();
    const json& args = scene.args.contains(command) ? scene.args.at(command) : no_args;
    if (!args.is_object()) throw Error(ErrorCode::ParseError, "command arguments must be an object");
    Checks checks;
    r.report["result"] = it->second(Context{scene, args, tol, checks});
    r.report["checks"] = checks.list();
    r.report["status"] = checks.ok() ? "pass" : "fail";
    r.exit_code = checks.ok() ? 0 : 1;
  } catch (const Error& e) {
    r.report["status"] = "error";
    r.report["error"] = error_json(e);
    r.exit_code = exit_code_for(e.code());
  } catch (const nlohmann::json::exception& e) {
    r.report["status"] = "error";
    r.report["error"] = {{"code", "ParseError"}, {"message", e.what()}};
    r.exit_code = 2;
  } catch (const std::exception& e) {
    r.report["status"] = "error";
    r.report["error"] = {{"code", "InternalError"}, {"message", e.what()}};
    r.exit_code = 1;
  }
  if (!options.stable) {
    const auto elapsed = std::chrono::steady_clock::now() - start;
    r.report["wall_time_ms"] = std::chrono::duration<double, std::milli>(elapsed).count();
  }
  return r;
}

json rounded(const json& j) {
  if (j.is_number_float()) {
    const double v = j.get<double>();
    if (std::isnan(v)) return nullptr;
    if (std::isinf(v)) return v > 0 ? "Infinity" : "-Infinity";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    const double r = std::strtod(buf, nullptr);
    return r == 0.0 ? 0.0 : r;
  }
  if (j.is_array()) {
    json out = json::array();
    for (const auto& e : j) out.push_back(rounded(e));
    return out;
  }
  if (j.is_object()) {
    json out = json::object();
    for (const auto& [k, v] : j.items()) out[k] = rounded(v);
    return out;
  }
  return j;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& [k, v] : handlers()) n.push_back(k);
    return n;
  }();
  return names;
}

CommandResult run_command(const std::string& command, const json& scene,
                          const CommandOptions& options) {
  return run(
      command,
      [&](Tolerance tol) {
        try {
          return parse_scene(scene, tol);
        } catch (const json::exception& e) {
          throw Error(ErrorCode::ParseError, std::string("unexpected value: ") + e.what());
        }
      },
      json::object(), options);
}

CommandResult run_command_file(const std::string& command, const std::string& scene_path,
                               const CommandOptions& options) {
  return run(
      command, [&](Tolerance tol) { return load_scene(scene_path, tol); },
      {{"scene", scene_path}}, options);
}

std::string format_report(const json& report) { return rounded(report).dump(2) + "\n"; }

}  // namespace prostar
