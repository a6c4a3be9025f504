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

#include "cqtsim/statistics.hpp"

#include <cmath>
#include <sstream>

#include "cqtsim/errors.hpp"

namespace cqtsim {

namespace {

void check_event_index(const DistributionTable& table, std::size_t index) {
  if (index >= table.event_order.size()) {
    std::ostringstream msg;
    msg << "event index " << index << " out of range for "
        << table.event_order.size() << " events";
    throw ConfigError(msg.str());
  }
}

bool row_matches(const std::vector<int>& tuple,
                 std::span<const std::pair<std::size_t, int>> constraints) {
  for (const auto& [index, outcome] : constraints) {
    if (tuple[index] != outcome) return false;
  }
  return true;
}

}  // namespace

DistributionTable to_table(const JointDistribution& dist) {
  return DistributionTable{dist.event_order, dist.rows};
}

DistributionTable to_table(const RunStatistics& stats) {
  DistributionTable table;
  table.event_order = stats.event_order;
  table.rows.reserve(stats.counts.size());
  const double denom = static_cast<double>(stats.total_runs);
  for (const auto& [tuple, count] : stats.counts) {
    table.rows.emplace_back(tuple, static_cast<double>(count) / denom);
  }
  return table;
}

std::vector<double> marginal(const DistributionTable& table,
                             std::size_t event_index, int n_outcomes) {
  check_event_index(table, event_index);
  std::vector<double> result(n_outcomes, 0.0);
  for (const auto& [tuple, weight] : table.rows) {
    const int outcome = tuple[event_index];
    if (outcome < 0 || outcome >= n_outcomes) {
      std::ostringstream msg;
      msg << "outcome " << outcome << " outside the declared range of "
          << n_outcomes;
      throw ConfigError(msg.str());
    }
    result[outcome] += weight;
  }
  return result;
}

double event_probability(
    const DistributionTable& table,
    std::span<const std::pair<std::size_t, int>> constraints) {
  for (const auto& [index, _] : constraints) check_event_index(table, index);
  double total = 0.0;
  for (const auto& [tuple, weight] : table.rows) {
    if (row_matches(tuple, constraints)) total += weight;
  }
  return total;
}

double conditional_probability(
    const DistributionTable& table, std::size_t event_index, int outcome,
    std::span<const std::pair<std::size_t, int>> given) {
  const double denominator = event_probability(table, given);
  if (!(denominator > 0.0)) {
    throw NumericError("conditional_probability: conditioning event has "
                       "zero probability");
  }
  std::vector<std::pair<std::size_t, int>> joint(given.begin(), given.end());
  joint.emplace_back(event_index, outcome);
  return event_probability(table, joint) / denominator;
}

double correlator(const DistributionTable& table, std::size_t first,
                  std::size_t second) {
  check_event_index(table, first);
  check_event_index(table, second);
  double value = 0.0;
  for (const auto& [tuple, weight] : table.rows) {
    const double s_first = tuple[first] == 0 ? 1.0 : -1.0;
    const double s_second = tuple[second] == 0 ? 1.0 : -1.0;
    value += weight * s_first * s_second;
  }
  return value;
}

double chsh_s(double e_ab, double e_ab_prime, double e_aprime_b,
              double e_aprime_b_prime) {
  return std::abs(e_ab - e_ab_prime + e_aprime_b + e_aprime_b_prime);
}

std::vector<double> click_histogram(const DistributionTable& table,
                                    int click_outcome) {
  std::vector<double> histogram(table.event_order.size() + 1, 0.0);
  for (const auto& [tuple, weight] : table.rows) {
    std::size_t clicks = 0;
    for (int outcome : tuple) {
      if (outcome == click_outcome) ++clicks;
    }
    histogram[clicks] += weight;
  }
  return histogram;
}

double mean_click_count(const DistributionTable& table, int click_outcome) {
  const std::vector<double> histogram = click_histogram(table, click_outcome);
  double mean = 0.0;
  for (std::size_t n = 0; n < histogram.size(); ++n) {
    mean += static_cast<double>(n) * histogram[n];
  }
  return mean;
}

double total_variation(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) {
    std::ostringstream msg;
    msg << "total_variation: mismatched supports (" << p.size() << " vs "
        << q.size() << ")";
    throw ConfigError(msg.str());
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    sum += std::abs(p[i] - q[i]);
  }
  return 0.5 * sum;
}

double poisson_reference(int n) {
  if (n < 0) {
    throw ConfigError("poisson_reference: n must be nonnegative");
  }
  double factorial = 1.0;
  for (int i = 2; i <= n; ++i) factorial *= i;
  return std::exp(-1.0) / factorial;
}

}  // namespace cqtsim
