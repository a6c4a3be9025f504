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

#ifndef CQTSIM_STATISTICS_HPP_
#define CQTSIM_STATISTICS_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cqtsim/engine.hpp"

namespace cqtsim {

/// Uniform view over exact joint distributions and empirical counts: rows
/// of (outcome tuple, weight) with weights summing to one.
struct DistributionTable {
  std::vector<std::string> event_order;
  std::vector<std::pair<std::vector<int>, double>> rows;
};

DistributionTable to_table(const JointDistribution& dist);
DistributionTable to_table(const RunStatistics& stats);

/// Marginal distribution of one event; `n_outcomes` sizes the result so
/// empirically unobserved outcomes still appear with weight zero.
std::vector<double> marginal(const DistributionTable& table,
                             std::size_t event_index, int n_outcomes);

/// Weight of the rows matching all (event index, outcome) constraints.
double event_probability(
    const DistributionTable& table,
    std::span<const std::pair<std::size_t, int>> constraints);

/// P(event = outcome | given), from the same table.
double conditional_probability(
    const DistributionTable& table, std::size_t event_index, int outcome,
    std::span<const std::pair<std::size_t, int>> given);

/// Pairwise correlator for two-outcome events with outcome 0 valued +1 and
/// outcome 1 valued -1. Always in [-1, 1].
double correlator(const DistributionTable& table, std::size_t first,
                  std::size_t second);

/// CHSH combination |E(a,b) - E(a,b') + E(a',b) + E(a',b')|.
double chsh_s(double e_ab, double e_ab_prime, double e_aprime_b,
              double e_aprime_b_prime);

/// Distribution of the number of events with the given outcome index per
/// tuple ("clicks"); result has length n_events + 1.
std::vector<double> click_histogram(const DistributionTable& table,
                                    int click_outcome = 1);

double mean_click_count(const DistributionTable& table, int click_outcome = 1);

/// (1/2) sum |p_i - q_i|; spans must have equal length.
double total_variation(std::span<const double> p, std::span<const double> q);

/// Poisson(1) reference weight e^{-1} / n!.
double poisson_reference(int n);

}  // namespace cqtsim

#endif  // CQTSIM_STATISTICS_HPP_
