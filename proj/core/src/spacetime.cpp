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

#include "cqtsim/spacetime.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "cqtsim/errors.hpp"

namespace cqtsim {

namespace {

void check_same_dimension(const SpacetimeEvent& a, const SpacetimeEvent& b) {
  if (a.x.size() != b.x.size()) {
    std::ostringstream msg;
    msg << "events '" << a.id << "' and '" << b.id
        << "' have different spatial dimensions (" << a.x.size() << " vs "
        << b.x.size() << ")";
    throw ConfigError(msg.str());
  }
}

double spatial_distance(const SpacetimeEvent& a, const SpacetimeEvent& b) {
  double sum_sq = 0.0;
  for (std::size_t i = 0; i < a.x.size(); ++i) {
    const double d = b.x[i] - a.x[i];
    sum_sq += d * d;
  }
  return std::sqrt(sum_sq);
}

}  // namespace

bool SpacetimeEvent::same_point(const SpacetimeEvent& other) const {
  return t == other.t && x == other.x;
}

bool causally_precedes(const SpacetimeEvent& a, const SpacetimeEvent& b) {
  check_same_dimension(a, b);
  if (a.same_point(b)) return false;
  return b.t - a.t >= spatial_distance(a, b);
}

bool spacelike_separated(const SpacetimeEvent& a, const SpacetimeEvent& b) {
  check_same_dimension(a, b);
  if (a.id == b.id && a.same_point(b)) return false;
  return !causally_precedes(a, b) && !causally_precedes(b, a);
}

std::vector<std::size_t> past_cone(const SpacetimeEvent& x,
                                   std::span<const SpacetimeEvent> events) {
  std::vector<std::size_t> cone;
  for (std::size_t i = 0; i < events.size(); ++i) {
    if (causally_precedes(events[i], x)) {
      cone.push_back(i);
    }
  }
  return cone;
}

std::vector<std::size_t> topological_order(
    std::span<const SpacetimeEvent> events) {
  for (std::size_t i = 0; i < events.size(); ++i) {
    for (std::size_t j = i + 1; j < events.size(); ++j) {
      if (events[i].same_point(events[j]) &&
          events[i].factor_index == events[j].factor_index) {
        std::ostringstream msg;
        msg << "events '" << events[i].id << "' and '" << events[j].id
            << "' coincide in space-time and act on the same factor";
        throw ConfigError(msg.str());
      }
    }
  }
  std::vector<std::size_t> order(events.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (events[a].t != events[b].t) return events[a].t < events[b].t;
    return events[a].id < events[b].id;
  });
  return order;
}

LocalityReport validate_locality(std::span<const SpacetimeEvent> events) {
  LocalityReport report;
  for (std::size_t i = 0; i < events.size(); ++i) {
    for (std::size_t j = i + 1; j < events.size(); ++j) {
      if (events[i].factor_index == events[j].factor_index &&
          spacelike_separated(events[i], events[j])) {
        report.violations.push_back({events[i].id, events[j].id});
      }
    }
  }
  report.ok = report.violations.empty();
  return report;
}

}  // namespace cqtsim
