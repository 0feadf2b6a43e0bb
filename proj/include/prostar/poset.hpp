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

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace prostar {

/// A finite directed partial order. Elements keep their input order, which
/// fixes every downstream matrix layout. Immutable once validated.
class DirectedPoset {
 public:
  /// Computes the reflexive-transitive closure of `leq_pairs` and validates
  /// antisymmetry and directedness.
  static DirectedPoset validate(
      std::vector<std::string> elements,
      const std::vector<std::pair<std::string, std::string>>& leq_pairs);

  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& elements() const { return labels_; }
  const std::string& label(std::size_t i) const { return labels_.at(i); }

  std::optional<std::size_t> find(std::string_view label) const;
  // Throws UnknownElement.
  std::size_t index_of(std::string_view label) const;

  bool leq(std::size_t a, std::size_t b) const { return leq_[a * size() + b] != 0; }

  // Index of the greatest element.
  std::size_t top() const { return top_; }

  // All λ ≤ mu, in element order.
  std::vector<std::size_t> lower_set(std::size_t mu) const;

  // First element (in element order) above both a and b.
  std::size_t upper_bound(std::size_t a, std::size_t b) const;

  // Every pair (λ, μ) with λ ≤ μ and λ ≠ μ.
  std::vector<std::pair<std::size_t, std::size_t>> strict_pairs() const;

  // The closed relation as label pairs, reflexive pairs omitted.
  std::vector<std::pair<std::string, std::string>> relation() const;

  bool operator==(const DirectedPoset& other) const {
    return labels_ == other.labels_ && leq_ == other.leq_;
  }

 private:
  DirectedPoset() = default;

  std::vector<std::string> labels_;
  std::vector<char> leq_;  // row-major size() x size()
  std::size_t top_ = 0;
};

DirectedPoset validate_poset(
    std::vector<std::string> elements,
    const std::vector<std::pair<std::string, std::string>>& leq_pairs);

// Label of the greatest element.
const std::string& maximum(const DirectedPoset& p);

// Sub-poset {λ : λ ≤ mu} with the induced order.
DirectedPoset branch(const DirectedPoset& p, std::string_view mu);

// Componentwise order on P × Q. Element (i, j) sits at index i * |Q| + j and
// is labelled "(p,q)".
DirectedPoset product_poset(const DirectedPoset& p, const DirectedPoset& q);

std::string product_label(std::string_view a, std::string_view b);

// Convenience constructors used by tests and generators.
DirectedPoset chain_poset(std::size_t n, std::string_view prefix = "c");
DirectedPoset singleton_poset(std::string label = "a");
// a ≤ b, a ≤ c, b ≤ d, c ≤ d
DirectedPoset diamond_poset();

}  // namespace prostar
