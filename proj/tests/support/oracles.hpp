// Copyright 2026 The skillner Authors
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
//
// Independent brute-force oracles the tests check the implementation
// against. Everything here is deliberately naive and shares no code with
// the library paths it verifies.

#ifndef SKILLNER_TESTS_SUPPORT_ORACLES_HPP_
#define SKILLNER_TESTS_SUPPORT_ORACLES_HPP_

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "skillner/corpus.hpp"
#include "skillner/graph.hpp"
#include "skillner/matcher.hpp"

namespace skillner::testing {

// ---------------------------------------------------------------- matcher

// Does the window [start, end) satisfy the pattern exactly, with every
// wildcard absorbing at most `cap` tokens? Exhaustive allocation search.
inline bool window_satisfies(const std::vector<PatternStep>& steps,
                             std::size_t step_index, const Sentence& sentence,
                             std::size_t pos, std::size_t end,
                             std::size_t cap) {
  if (step_index == steps.size()) return pos == end;
  const PatternStep& step = steps[step_index];
  if (step.quantifier == Quantifier::One) {
    if (pos >= end || !step_matches(step, sentence.tokens[pos])) return false;
    return window_satisfies(steps, step_index + 1, sentence, pos + 1, end,
                            cap);
  }
  for (std::size_t k = 0; k <= cap && pos + k <= end; ++k) {
    if (window_satisfies(steps, step_index + 1, sentence, pos + k, end, cap)) {
      return true;
    }
  }
  return false;
}

inline bool window_satisfies(const Pattern& pattern, const Sentence& sentence,
                             std::size_t start, std::size_t end,
                             std::size_t cap) {
  return window_satisfies(pattern.steps, 0, sentence, start, end, cap);
}

// All (start, end) extents by brute-force window enumeration, keeping the
// shortest window per start position.
inline std::vector<std::pair<std::size_t, std::size_t>> brute_force_extents(
    const Pattern& pattern, const Sentence& sentence, std::size_t cap) {
  std::vector<std::pair<std::size_t, std::size_t>> extents;
  const std::size_t n = sentence.tokens.size();
  for (std::size_t start = 0; start < n; ++start) {
    for (std::size_t end = start + 1; end <= n; ++end) {
      if (window_satisfies(pattern, sentence, start, end, cap)) {
        extents.emplace_back(start, end);
        break;  // shortest per start
      }
    }
  }
  return extents;
}

// ------------------------------------------------------------------- eval

struct OracleCounts {
  std::size_t tp = 0, fp = 0, fn = 0;
};

// Double-loop token counting for one label.
inline OracleCounts oracle_label_counts(
    const std::vector<std::vector<BioTag>>& gold,
    const std::vector<std::vector<BioTag>>& pred, BioTag label) {
  OracleCounts counts;
  for (std::size_t s = 0; s < gold.size(); ++s) {
    for (std::size_t i = 0; i < gold[s].size(); ++i) {
      const bool g = gold[s][i] == label;
      const bool p = pred[s][i] == label;
      if (g && p) ++counts.tp;
      if (!g && p) ++counts.fp;
      if (g && !p) ++counts.fn;
    }
  }
  return counts;
}

inline OracleCounts oracle_micro_counts(
    const std::vector<std::vector<BioTag>>& gold,
    const std::vector<std::vector<BioTag>>& pred) {
  OracleCounts micro;
  for (const BioTag label : {BioTag::BeginExtr, BioTag::InsideExtr}) {
    const OracleCounts c = oracle_label_counts(gold, pred, label);
    micro.tp += c.tp;
    micro.fp += c.fp;
    micro.fn += c.fn;
  }
  return micro;
}

// ------------------------------------------------------------------ graph

// Direct double sum over the dense adjacency matrix.
inline double modularity_double_sum(const CoocGraph& graph,
                                    const std::vector<int>& community,
                                    double gamma) {
  const std::size_t n = graph.node_count();
  std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
  for (const GraphEdge& edge : graph.edges) {
    a[edge.u][edge.v] += edge.weight;
    a[edge.v][edge.u] += edge.weight;
  }
  std::vector<double> degree(n, 0.0);
  double m2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) degree[i] += a[i][j];
    m2 += degree[i];
  }
  double q = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (community[i] != community[j]) continue;
      q += a[i][j] - gamma * degree[i] * degree[j] / m2;
    }
  }
  return q / m2;
}

// Enumerates every partition of {0..n-1} as restricted growth strings and
// calls f(community). Bell(12) ~ 4.2e6, fine for fixtures.
template <typename F>
void for_each_partition(int n, F f) {
  if (n <= 0) return;
  std::vector<int> a(n, 0);
  // m[i] = 1 + max(a[0..i-1]); a[i] may range over [0, m[i]].
  std::vector<int> m(n, 1);
  while (true) {
    f(a);
    int i = n - 1;
    while (i > 0 && a[i] >= m[i]) --i;
    if (i == 0) return;
    a[i] += 1;
    const int grown = std::max(m[i], a[i] + 1);
    for (int j = i + 1; j < n; ++j) {
      a[j] = 0;
      m[j] = grown;
    }
  }
}

// Exhaustive modularity maximum over all partitions.
inline double best_partition_q(const CoocGraph& graph, double gamma,
                               std::vector<int>* best_community = nullptr) {
  double best = -1e18;
  for_each_partition(static_cast<int>(graph.node_count()),
                     [&](const std::vector<int>& community) {
                       const double q =
                           modularity_double_sum(graph, community, gamma);
                       if (q > best) {
                         best = q;
                         if (best_community) *best_community = community;
                       }
                     });
  return best;
}

// O(jobs^2 * skills) pairwise projection counting, straight off the rows.
struct OracleEdge {
  std::string a, b;  // a < b
  double weight;
};

inline std::vector<OracleEdge> oracle_project(
    const std::vector<Assignment>& assignments, ProjectionMode mode) {
  std::vector<std::pair<std::string, std::string>> pairs;  // (group, entity)
  for (const Assignment& row : assignments) {
    const std::string& group =
        mode == ProjectionMode::Skill ? row.job_id : row.skill_id;
    const std::string& entity =
        mode == ProjectionMode::Skill ? row.skill_id : row.job_id;
    bool duplicate = false;
    for (const auto& [g, e] : pairs) {
      if (g == group && e == entity) duplicate = true;
    }
    if (!duplicate) pairs.emplace_back(group, entity);
  }
  std::vector<std::string> entities;
  for (const auto& [g, e] : pairs) {
    bool known = false;
    for (const std::string& known_entity : entities) {
      if (known_entity == e) known = true;
    }
    if (!known) entities.push_back(e);
  }
  std::sort(entities.begin(), entities.end());
  std::vector<OracleEdge> edges;
  for (std::size_t i = 0; i < entities.size(); ++i) {
    for (std::size_t j = i + 1; j < entities.size(); ++j) {
      double weight = 0.0;
      std::vector<std::string> groups;
      for (const auto& [g, e] : pairs) {
        if (e == entities[i]) groups.push_back(g);
      }
      for (const std::string& group : groups) {
        for (const auto& [g, e] : pairs) {
          if (g == group && e == entities[j]) weight += 1.0;
        }
      }
      if (weight > 0.0) edges.push_back({entities[i], entities[j], weight});
    }
  }
  return edges;
}

// ----------------------------------------------------------------- pareto

// Cumulative-sum oracle: how many sorted frequencies are kept at threshold.
inline std::size_t pareto_keep_count(const std::vector<std::size_t>& freqs,
                                     double threshold) {
  std::size_t total = 0;
  for (const std::size_t f : freqs) total += f;
  if (freqs.empty()) return 0;
  std::size_t cumulative = 0;
  for (std::size_t i = 0; i < freqs.size(); ++i) {
    cumulative += freqs[i];
    if (static_cast<double>(cumulative) >=
        threshold * static_cast<double>(total)) {
      return i + 1;
    }
  }
  return freqs.size();
}

}  // namespace skillner::testing

#endif  // SKILLNER_TESTS_SUPPORT_ORACLES_HPP_
