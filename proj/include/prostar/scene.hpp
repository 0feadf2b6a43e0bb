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

#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>

#include <json.hpp>

#include "prostar/csmodule.hpp"
#include "prostar/dilation.hpp"
#include "prostar/kernel.hpp"
#include "prostar/localg.hpp"
#include "prostar/lochilbert.hpp"
#include "prostar/locop.hpp"
#include "prostar/poset.hpp"

namespace prostar {

struct NamedAction {
  std::string kernel;
  SemigroupAction action;
};

/// Every named object of one scene document, constructed and validated.
struct Scene {
  std::map<std::string, DirectedPoset> posets;
  std::map<std::string, SpacePtr> spaces;
  std::map<std::string, LocallyBoundedOperator> operators;
  std::map<std::string, ConcreteLocallyCStarAlgebra> algebras;
  std::map<std::string, MatrixProjectiveSystem> systems;
  std::map<std::string, OperatorKernel> kernels;
  std::map<std::string, StarSemigroup> semigroups;
  std::map<std::string, NamedAction> actions;
  std::map<std::string, std::pair<std::string, CpMap>> cp_maps;  // algebra name, map
  std::map<std::string, AbstractHilbertModule> modules;
  std::map<std::string, ConcreteHilbertModule> concrete_modules;
  nlohmann::json args = nlohmann::json::object();

  // Lookups throw ReferenceError for unknown names.
  const DirectedPoset& poset(const std::string& name) const;
  const SpacePtr& space(const std::string& name) const;
  const LocallyBoundedOperator& op(const std::string& name) const;
  const ConcreteLocallyCStarAlgebra& algebra(const std::string& name) const;
  const MatrixProjectiveSystem& system(const std::string& name) const;
  const OperatorKernel& kernel(const std::string& name) const;
  const StarSemigroup& semigroup(const std::string& name) const;
  const NamedAction& action(const std::string& name) const;
  const std::pair<std::string, CpMap>& cp_map(const std::string& name) const;
  const AbstractHilbertModule& module(const std::string& name) const;
  const ConcreteHilbertModule& concrete_module(const std::string& name) const;
};

// Malformed documents throw ParseError, dangling names ReferenceError, and
// invalid mathematical data the error of the failing constructor.
Scene parse_scene(const nlohmann::json& doc, Tolerance tol = {});
Scene load_scene(const std::string& path, Tolerance tol = {});

// Matrix from a list of rows; entries are numbers or [re, im] pairs.
Mat parse_matrix(const nlohmann::json& j);
cplx parse_complex(const nlohmann::json& j);

}  // namespace prostar
