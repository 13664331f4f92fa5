/*
 * Copyright 2026 The gcmc Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "gcmc/dse.hpp"

namespace gcmc::test {

inline int priority(tech::VariantName v) {
  int rank = 0;
  while (tech::kAllVariants[rank] != v) ++rank;
  return rank;
}

// Exhaustive reference planner. Every technology-to-bin assignment is
// enumerated; infeasible ones are discarded and the rest are ranked by a
// weighted count in which one lower-priority bin outweighs any number of
// higher-priority bins.
struct OraclePlan {
  std::vector<tech::VariantName> per_bin;
  std::set<tech::VariantName> set;
  double cost = 0;
};

inline std::optional<OraclePlan> brute_force(const dse::WorkloadRequirement& r,
                                             const std::vector<dse::CapabilityEnvelope>& envs) {
  const std::size_t n = r.bins.size();
  const std::size_t k = envs.size();
  const double base = static_cast<double>(n + 1);
  auto ok = [&](const dse::CapabilityEnvelope& e, const dse::LifetimeBin& b) {
    return r.f_read_req_hz * b.traffic_share <= e.f_op_max && b.t_max_s <= e.t_retention_max;
  };
  std::optional<OraclePlan> best;
  std::vector<std::size_t> pick(n, 0);
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= k;
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t rest = code;
    for (std::size_t i = 0; i < n; ++i) {
      pick[i] = rest % k;
      rest /= k;
    }
    OraclePlan p;
    bool feasible = true;
    for (std::size_t i = 0; i < n && feasible; ++i) {
      const auto& e = envs[pick[i]];
      feasible = ok(e, r.bins[i]);
      p.per_bin.push_back(e.variant);
      p.set.insert(e.variant);
      p.cost += std::pow(base, priority(e.variant));
    }
    if (feasible && (!best || p.cost < best->cost)) best = p;
  }
  return best;
}

// 1 to 8 contiguous bins with log-uniform edges between 1 ns and 10 Gs and
// a log-uniform read frequency between 10 MHz and about 16 GHz.
inline dse::WorkloadRequirement random_requirement(std::mt19937_64& rng, int id) {
  std::uniform_int_distribution<int> nbins(1, 8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int n = nbins(rng);
  std::vector<double> edges;
  for (int i = 0; i <= n; ++i) edges.push_back(std::pow(10.0, -9.0 + 19.0 * u(rng)));
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  while (static_cast<int>(edges.size()) < n + 1) edges.push_back(edges.back() * 10);
  std::vector<double> w;
  double sum = 0;
  for (int i = 0; i < n; ++i) {
    w.push_back(0.05 + u(rng));
    sum += w.back();
  }
  dse::WorkloadRequirement r{id, "task" + std::to_string(id), dse::CacheLevel::L1,
                             std::pow(10.0, 7.0 + 3.2 * u(rng)), {}};
  double acc = 0;
  for (int i = 0; i < n; ++i) {
    const double share = i + 1 == n ? 1.0 - acc : w[i] / sum;
    acc += share;
    r.bins.push_back({edges[i], edges[i + 1], share});
  }
  return r;
}

}  // namespace gcmc::test
