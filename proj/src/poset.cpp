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

#include "prostar/poset.hpp"

#include <set>

#include "prostar/error.hpp"

namespace prostar {

DirectedPoset DirectedPoset::validate(
    std::vector<std::string> elements,
    const std::vector<std::pair<std::string, std::string>>& leq_pairs) {
  if (elements.empty()) throw Error(ErrorCode::EmptyPoset, "poset has no elements");
  {
    std::set<std::string> seen;
    for (const auto& e : elements)
      if (!seen.insert(e).second)
        throw Error(ErrorCode::DuplicateElement, "duplicate label '" + e + "'", {e});
  }

  DirectedPoset p;
  p.labels_ = std::move(elements);
  const std::size_t n = p.size();
  p.leq_.assign(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) p.leq_[i * n + i] = 1;
  for (const auto& [a, b] : leq_pairs) p.leq_[p.index_of(a) * n + p.index_of(b)] = 1;

  // Warshall closure.
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (p.leq_[i * n + k])
        for (std::size_t j = 0; j < n; ++j)
          if (p.leq_[k * n + j]) p.leq_[i * n + j] = 1;

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (p.leq(i, j) && p.leq(j, i))
        throw Error(ErrorCode::NotAntisymmetric,
                    "cycle between '" + p.labels_[i] + "' and '" + p.labels_[j] + "'",
                    {p.labels_[i], p.labels_[j]});

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      bool bounded = false;
      for (std::size_t k = 0; k < n && !bounded; ++k) bounded = p.leq(i, k) && p.leq(j, k);
      if (!bounded)
        throw Error(ErrorCode::NotDirected,
                    "'" + p.labels_[i] + "' and '" + p.labels_[j] + "' have no upper bound",
                    {p.labels_[i], p.labels_[j]});
    }

  // Finite and directed: exactly one element dominates everything.
  for (std::size_t t = 0; t < n; ++t) {
    bool is_top = true;
    for (std::size_t i = 0; i < n && is_top; ++i) is_top = p.leq(i, t);
    if (is_top) {
      p.top_ = t;
      break;
    }
  }
  return p;
}

std::optional<std::size_t> DirectedPoset::find(std::string_view label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i)
    if (labels_[i] == label) return i;
  return std::nullopt;
}

std::size_t DirectedPoset::index_of(std::string_view label) const {
  if (auto i = find(label)) return *i;
  throw Error(ErrorCode::UnknownElement, "no element '" + std::string(label) + "'",
              {std::string(label)});
}

std::vector<std::size_t> DirectedPoset::lower_set(std::size_t mu) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < size(); ++i)
    if (leq(i, mu)) out.push_back(i);
  return out;
}

std::size_t DirectedPoset::upper_bound(std::size_t a, std::size_t b) const {
  for (std::size_t k = 0; k < size(); ++k)
    if (leq(a, k) && leq(b, k)) return k;
  return top_;
}

std::vector<std::pair<std::size_t, std::size_t>> DirectedPoset::strict_pairs() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t j = 0; j < size(); ++j)
      if (i != j && leq(i, j)) out.emplace_back(i, j);
  return out;
}

std::vector<std::pair<std::string, std::string>> DirectedPoset::relation() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (auto [i, j] : strict_pairs()) out.emplace_back(labels_[i], labels_[j]);
  return out;
}

DirectedPoset validate_poset(
    std::vector<std::string> elements,
    const std::vector<std::pair<std::string, std::string>>& leq_pairs) {
  return DirectedPoset::validate(std::move(elements), leq_pairs);
}

const std::string& maximum(const DirectedPoset& p) { return p.label(p.top()); }

DirectedPoset branch(const DirectedPoset& p, std::string_view mu) {
  const std::size_t m = p.index_of(mu);
  std::vector<std::string> elems;
  for (std::size_t i : p.lower_set(m)) elems.push_back(p.label(i));
  std::vector<std::pair<std::string, std::string>> rel;
  for (const auto& [a, b] : p.relation())
    if (p.leq(p.index_of(b), m)) rel.emplace_back(a, b);
  return DirectedPoset::validate(std::move(elems), rel);
}

std::string product_label(std::string_view a, std::string_view b) {
  return "(" + std::string(a) + "," + std::string(b) + ")";
}

DirectedPoset product_poset(const DirectedPoset& p, const DirectedPoset& q) {
  std::vector<std::string> elems;
  elems.reserve(p.size() * q.size());
  for (const auto& a : p.elements())
    for (const auto& b : q.elements()) elems.push_back(product_label(a, b));
  std::vector<std::pair<std::string, std::string>> rel;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = 0; j < q.size(); ++j)
      for (std::size_t k = 0; k < p.size(); ++k)
        for (std::size_t l = 0; l < q.size(); ++l)
          if ((i != k || j != l) && p.leq(i, k) && q.leq(j, l))
            rel.emplace_back(elems[i * q.size() + j], elems[k * q.size() + l]);
  return DirectedPoset::validate(std::move(elems), rel);
}

DirectedPoset chain_poset(std::size_t n, std::string_view prefix) {
  std::vector<std::string> elems;
  std::vector<std::pair<std::string, std::string>> rel;
  for (std::size_t i = 0; i < n; ++i) {
    elems.push_back(std::string(prefix) + std::to_string(i));
    if (i > 0) rel.emplace_back(elems[i - 1], elems[i]);
  }
  return DirectedPoset::validate(std::move(elems), rel);
}

DirectedPoset singleton_poset(std::string label) {
  return DirectedPoset::validate({std::move(label)}, {});
}

DirectedPoset diamond_poset() {
  return DirectedPoset::validate({"a", "b", "c", "d"},
                                 {{"a", "b"}, {"a", "c"}, {"b", "d"}, {"c", "d"}});
}

}  // namespace prostar
