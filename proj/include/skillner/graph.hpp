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

#ifndef SKILLNER_GRAPH_HPP_
#define SKILLNER_GRAPH_HPP_

#include <cstdint>
#include <string>
#include <vector>

namespace skillner {

/// One row of the skill-to-job assignment table.
struct Assignment {
  std::string job_id;
  std::string job_label;
  std::string skill_id;
  std::string skill_label;
};

enum class ProjectionMode { Skill, Job };

struct GraphEdge {
  std::size_t u = 0;  // u < v, node indices
  std::size_t v = 0;
  double weight = 0.0;

  bool operator==(const GraphEdge&) const = default;
};

/// Undirected weighted co-occurrence graph. Nodes are sorted by id, edges
/// by (u, v), so the structure is canonical: independent of assignment row
/// order. Projection never creates self-loops.
struct CoocGraph {
  std::vector<std::string> ids;     // node index -> external id
  std::vector<std::string> labels;  // node index -> display label
  std::vector<GraphEdge> edges;

  std::size_t node_count() const { return ids.size(); }
  std::size_t edge_count() const { return edges.size(); }

  /// Sum of all edge weights m; the handshake sum of degrees is 2m.
  double total_weight() const;
  /// Weighted degree of every node.
  std::vector<double> weighted_degrees() const;
};

/// Collapses the bipartite assignment table into a unipartite graph.
/// Skill mode: edge (s1, s2) weighted by the number of jobs listing both.
/// Job mode: edge (j1, j2) weighted by the number of shared skills.
/// Duplicate (job, skill) rows count once.
CoocGraph project(const std::vector<Assignment>& assignments,
                  ProjectionMode mode);

/// Generalized weighted modularity
///   Q = (1/2m) sum_ij [A_ij - gamma k_i k_j / (2m)] delta(c_i, c_j)
/// with gamma multiplying the null-model term; gamma = 1 is the standard
/// weighted modularity. Requires m > 0.
double modularity(const CoocGraph& graph, const std::vector<int>& community,
                  double resolution = 1.0);

struct Partition {
  std::vector<int> community;  // dense 0-based ids, one per node
  double q = 0.0;
  double resolution = 1.0;
  std::uint64_t seed = 0;
};

struct LouvainLevel {
  std::size_t node_count = 0;
  double degree_sum = 0.0;  // must equal 2m at every level
  double two_m = 0.0;
  double q = 0.0;  // modularity after the level's local moves
};

struct LouvainResult {
  Partition partition;
  std::vector<LouvainLevel> levels;
};

/// Two-phase Louvain: seeded-order local moves to the best positive-gain
/// neighbor community until none remains, then community aggregation,
/// repeated to a fixpoint. The returned Q equals modularity() of the final
/// partition. An edgeless graph yields the singleton partition with Q = 0.
LouvainResult louvain(const CoocGraph& graph, double resolution = 1.0,
                      std::uint64_t seed = 0);

struct GraphStats {
  std::size_t nodes = 0;
  std::size_t edges = 0;
  double average_degree = 0.0;           // 2|E| / |V|
  double average_weighted_degree = 0.0;  // 2m / |V|
};

GraphStats stats(const CoocGraph& graph);

/// GEXF 1.2 with edge weights and an integer "community" node attribute.
/// Deterministic output; re-importable by import_gexf without loss.
void export_gexf(const CoocGraph& graph, const Partition& partition,
                 const std::string& path, const std::string& description = "");

struct ImportedGexf {
  CoocGraph graph;
  Partition partition;
};

/// Reads files produced by export_gexf.
ImportedGexf import_gexf(const std::string& path);

/// Assignment CSV with header job_id,job_label,skill_id,skill_label.
std::vector<Assignment> read_assignments_csv(const std::string& path);

/// TSV rows (node_id, community, weighted degree) behind "# key = value"
/// provenance lines.
void write_partition_tsv(const CoocGraph& graph, const Partition& partition,
                         const std::string& path,
                         const std::vector<std::pair<std::string, std::string>>&
                             provenance = {});

}  // namespace skillner

#endif  // SKILLNER_GRAPH_HPP_
