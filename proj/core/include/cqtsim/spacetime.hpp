// Copyright 2026 The cqtsim Authors
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

#ifndef CQTSIM_SPACETIME_HPP_
#define CQTSIM_SPACETIME_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace cqtsim {

/// A measurement site in Minkowski space-time (c = 1). `factor_index` names
/// the tensor factor measured here; `model_ref` names the attached
/// measurement model in the experiment's model table.
struct SpacetimeEvent {
  std::string id;
  double t = 0.0;
  std::vector<double> x;
  int factor_index = 0;
  std::string model_ref;

  bool same_point(const SpacetimeEvent& other) const;
};

/// True iff b lies in the closed future light cone of a and the two points
/// differ: t_b - t_a >= |x_b - x_a|. Lightlike separation counts as causal.
bool causally_precedes(const SpacetimeEvent& a, const SpacetimeEvent& b);

/// True iff neither event causally precedes the other and they are distinct
/// events. Coincident coordinates on distinct events count as spacelike.
bool spacelike_separated(const SpacetimeEvent& a, const SpacetimeEvent& b);

/// Indices of the events inside the closed past light cone of x, excluding
/// x itself.
std::vector<std::size_t> past_cone(const SpacetimeEvent& x,
                                   std::span<const SpacetimeEvent> events);

/// Linear extension of the causal partial order: sorted by (t, id), which
/// respects causal precedence because precedence implies strictly earlier
/// time. Rejects two events at identical coordinates acting on the same
/// factor.
std::vector<std::size_t> topological_order(
    std::span<const SpacetimeEvent> events);

struct LocalityViolation {
  std::string first_id;
  std::string second_id;
};

struct LocalityReport {
  bool ok = true;
  std::vector<LocalityViolation> violations;
};

/// Checks that every spacelike-separated pair of events targets distinct
/// tensor factors. The causal engine requires this: it makes cone-restricted
/// conditioning order-independent.
LocalityReport validate_locality(std::span<const SpacetimeEvent> events);

}  // namespace cqtsim

#endif  // CQTSIM_SPACETIME_HPP_
