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

#include "skillner/graph.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "skillner/csv.hpp"
#include "skillner/error.hpp"
#include "skillner/rng.hpp"
#include "skillner/text_format.hpp"
#include "skillner/version.hpp"

namespace skillner {

double CoocGraph::total_weight() const {
  double m = 0.0;
  for (const GraphEdge& edge : edges) m += edge.weight;
  return m;
}

std::vector<double> CoocGraph::weighted_degrees() const {
  std::vector<double> degrees(ids.size(), 0.0);
  for (const GraphEdge& edge : edges) {
    degrees[edge.u] += edge.weight;
    degrees[edge.v] += edge.weight;
  }
  return degrees;
}

CoocGraph project(const std::vector<Assignment>& assignments,
                  ProjectionMode mode) {
  if (assignments.empty()) throw DataError("assignment table is empty");

  // Canonical node order: sorted ids; labels take the lexicographic minimum
  // seen for an id, so the graph is invariant under row permutation.
  std::map<std::string, std::string> id_to_label;
  std::set<std::pair<std::string, std::string>> seen;
  std::map<std::string, std::set<std::string>> groups;  // group -> entity ids
  for (const Assignment& row : assignments) {
    const std::string& entity =
        mode == ProjectionMode::Skill ? row.skill_id : row.job_id;
    const std::string& entity_label =
        mode == ProjectionMode::Skill ? row.skill_label : row.job_label;
    const std::string& group =
        mode == ProjectionMode::Skill ? row.job_id : row.skill_id;
    if (!seen.insert({row.job_id, row.skill_id}).second) continue;
    auto [it, inserted] = id_to_label.emplace(entity, entity_label);
    if (!inserted && entity_label < it->second) it->second = entity_label;
    groups[group].insert(entity);
  }

  CoocGraph graph;
  std::map<std::string, std::size_t> index;
  for (const auto& [id, label] : id_to_label) {
    index.emplace(id, graph.ids.size());
    graph.ids.push_back(id);
    graph.labels.push_back(label);
  }

  std::map<std::pair<std::size_t, std::size_t>, double> weights;
  for (const auto& [group, members] : groups) {
    std::vector<std::size_t> nodes;
    nodes.reserve(members.size());
    for (const std::string& id : members) nodes.push_back(index.at(id));
    std::sort(nodes.begin(), nodes.end());
    for (std::size_t a = 0; a < nodes.size(); ++a) {
      for (std::size_t b = a + 1; b < nodes.size(); ++b) {
        weights[{nodes[a], nodes[b]}] += 1.0;
      }
    }
  }
  for (const auto& [pair, weight] : weights) {
    graph.edges.push_back(GraphEdge{pair.first, pair.second, weight});
  }
  return graph;
}

namespace {

void check_partition(const CoocGraph& graph, const std::vector<int>& community) {
  if (community.size() != graph.node_count()) {
    throw DataError("partition does not cover all nodes");
  }
  for (const int c : community) {
    if (c < 0) throw DataError("negative community id");
  }
}

// Internal multigraph for the aggregation phases: adjacency lists plus
// self-loop weights. A self-loop of weight s contributes 2s to the node's
// degree and to A_ii, keeping Q invariant across aggregation.
struct WorkGraph {
  std::vector<std::vector<std::pair<int, double>>> adj;
  std::vector<double> self_loop;
  std::vector<double> degree;
  double m2 = 0.0;  // sum of degrees == 2m

  int size() const { return static_cast<int>(adj.size()); }
};

WorkGraph make_work_graph(const CoocGraph& graph) {
  WorkGraph work;
  work.adj.resize(graph.node_count());
  work.self_loop.assign(graph.node_count(), 0.0);
  work.degree.assign(graph.node_count(), 0.0);
  for (const GraphEdge& edge : graph.edges) {
    work.adj[edge.u].push_back({static_cast<int>(edge.v), edge.weight});
    work.adj[edge.v].push_back({static_cast<int>(edge.u), edge.weight});
    work.degree[edge.u] += edge.weight;
    work.degree[edge.v] += edge.weight;
    work.m2 += 2.0 * edge.weight;
  }
  return work;
}

double work_modularity(const WorkGraph& work, const std::vector<int>& community,
                       double resolution) {
  int max_comm = -1;
  for (const int c : community) max_comm = std::max(max_comm, c);
  std::vector<double> in(max_comm + 1, 0.0), tot(max_comm + 1, 0.0);
  for (int i = 0; i < work.size(); ++i) {
    tot[community[i]] += work.degree[i];
    in[community[i]] += 2.0 * work.self_loop[i];
    for (const auto& [j, w] : work.adj[i]) {
      if (community[j] == community[i]) in[community[i]] += w;
    }
  }
  double q = 0.0;
  for (int c = 0; c <= max_comm; ++c) {
    q += in[c] / work.m2 -
         resolution * (tot[c] / work.m2) * (tot[c] / work.m2);
  }
  return q;
}

// One level of local moves. Returns true when at least one node moved.
bool local_moves(const WorkGraph& work, double resolution, Rng& rng,
                 std::vector<int>& community) {
  const int n = work.size();
  std::vector<double> tot(n, 0.0);
  for (int i = 0; i < n; ++i) tot[community[i]] += work.degree[i];

  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  rng.shuffle(order);

  std::vector<double> link(n, 0.0);  // weight from the node to a community
  bool any_move = false;
  bool moved = true;
  while (moved) {
    moved = false;
    for (const int i : order) {
      const int own = community[i];
      std::vector<int> candidates;
      for (const auto& [j, w] : work.adj[i]) {
        const int c = community[j];
        if (link[c] == 0.0 && c != own) candidates.push_back(c);
        if (c != own || j != i) link[c] += w;
      }
      // Gains are compared with the node removed from its community.
      tot[own] -= work.degree[i];
      const double k = work.degree[i];
      auto gain = [&](int c) {
        return link[c] - resolution * tot[c] * k / work.m2;
      };
      const double stay = gain(own);
      int best = own;
      double best_gain = stay;
      std::sort(candidates.begin(), candidates.end());
      for (const int c : candidates) {
        const double g = gain(c);
        if (g > best_gain + 1e-12) {
          best = c;
          best_gain = g;
        }
      }
      tot[best] += work.degree[i];
      if (best != own) {
        community[i] = best;
        moved = true;
        any_move = true;
      }
      link[own] = 0.0;
      for (const int c : candidates) link[c] = 0.0;
    }
  }
  return any_move;
}

void renumber_dense(std::vector<int>& community) {
  std::map<int, int> remap;
  for (int& c : community) {
    auto [it, inserted] = remap.emplace(c, static_cast<int>(remap.size()));
    c = it->second;
  }
}

WorkGraph aggregate(const WorkGraph& work, const std::vector<int>& community,
                    int num_communities) {
  WorkGraph agg;
  agg.adj.resize(num_communities);
  agg.self_loop.assign(num_communities, 0.0);
  agg.degree.assign(num_communities, 0.0);
  agg.m2 = work.m2;

  std::map<std::pair<int, int>, double> between;
  for (int i = 0; i < work.size(); ++i) {
    const int ci = community[i];
    agg.degree[ci] += work.degree[i];
    agg.self_loop[ci] += work.self_loop[i];
    for (const auto& [j, w] : work.adj[i]) {
      const int cj = community[j];
      if (ci == cj) {
        if (i < j) agg.self_loop[ci] += w;  // each intra edge folds in once
      } else if (ci < cj) {
        between[{ci, cj}] += w;
      }
    }
  }
  for (const auto& [pair, w] : between) {
    agg.adj[pair.first].push_back({pair.second, w});
    agg.adj[pair.second].push_back({pair.first, w});
  }
  return agg;
}

}  // namespace

double modularity(const CoocGraph& graph, const std::vector<int>& community,
                  double resolution) {
  check_partition(graph, community);
  const double m = graph.total_weight();
  if (m <= 0.0) throw DataError("modularity needs at least one edge");
  const WorkGraph work = make_work_graph(graph);
  return work_modularity(work, community, resolution);
}

LouvainResult louvain(const CoocGraph& graph, double resolution,
                      std::uint64_t seed) {
  if (resolution <= 0.0) throw DataError("resolution must be positive");
  LouvainResult result;
  result.partition.resolution = resolution;
  result.partition.seed = seed;

  const std::size_t n = graph.node_count();
  result.partition.community.resize(n);
  if (graph.edges.empty()) {
    for (std::size_t i = 0; i < n; ++i) {
      result.partition.community[i] = static_cast<int>(i);
    }
    result.partition.q = 0.0;
    return result;
  }

  Rng rng(seed);
  WorkGraph work = make_work_graph(graph);
  // node -> community of the original graph, composed across levels
  std::vector<int> assignment(n);
  for (std::size_t i = 0; i < n; ++i) assignment[i] = static_cast<int>(i);

  while (true) {
    std::vector<int> community(work.size());
    for (int i = 0; i < work.size(); ++i) community[i] = i;
    const bool improved = local_moves(work, resolution, rng, community);
    renumber_dense(community);
    int num_communities = 0;
    for (const int c : community) num_communities = std::max(num_communities, c + 1);

    for (int& a : assignment) a = community[a];

    LouvainLevel level;
    level.node_count = static_cast<std::size_t>(work.size());
    level.two_m = work.m2;
    level.degree_sum = 0.0;
    for (const double d : work.degree) level.degree_sum += d;
    level.q = work_modularity(work, community, resolution);
    result.levels.push_back(level);

    if (!improved || num_communities == work.size()) break;
    work = aggregate(work, community, num_communities);
  }

  renumber_dense(assignment);
  result.partition.community = std::move(assignment);
  result.partition.q = modularity(graph, result.partition.community, resolution);
  return result;
}

GraphStats stats(const CoocGraph& graph) {
  GraphStats s;
  s.nodes = graph.node_count();
  s.edges = graph.edge_count();
  if (s.nodes > 0) {
    s.average_degree = 2.0 * static_cast<double>(s.edges) /
                       static_cast<double>(s.nodes);
    s.average_weighted_degree =
        2.0 * graph.total_weight() / static_cast<double>(s.nodes);
  }
  return s;
}

namespace {

std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (const char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string xml_unescape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '&') {
      out.push_back(s[i]);
      continue;
    }
    const std::size_t semi = s.find(';', i);
    const std::string entity = s.substr(i, semi - i + 1);
    if (entity == "&amp;") out.push_back('&');
    else if (entity == "&lt;") out.push_back('<');
    else if (entity == "&gt;") out.push_back('>');
    else if (entity == "&quot;") out.push_back('"');
    else if (entity == "&apos;") out.push_back('\'');
    else throw DataError("unknown XML entity: " + entity);
    i = semi;
  }
  return out;
}

// Value of attribute `name` in a single-line XML element, or empty.
bool xml_attribute(const std::string& line, const std::string& name,
                   std::string* value) {
  const std::string needle = name + "=\"";
  const std::size_t at = line.find(needle);
  if (at == std::string::npos) return false;
  const std::size_t begin = at + needle.size();
  const std::size_t end = line.find('"', begin);
  if (end == std::string::npos) return false;
  *value = xml_unescape(line.substr(begin, end - begin));
  return true;
}

}  // namespace

void export_gexf(const CoocGraph& graph, const Partition& partition,
                 const std::string& path, const std::string& description) {
  check_partition(graph, partition.community);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write gexf file: " + path);

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<gexf xmlns=\"http://www.gexf.net/1.2draft\" version=\"1.2\">\n";
  out << "  <meta>\n";
  out << "    <creator>" << kToolkitName << " " << kToolkitVersion
      << "</creator>\n";
  out << "    <description>" << xml_escape(description) << "</description>\n";
  out << "  </meta>\n";
  out << "  <graph defaultedgetype=\"undirected\">\n";
  out << "    <attributes class=\"node\">\n";
  out << "      <attribute id=\"0\" title=\"community\" type=\"integer\"/>\n";
  out << "    </attributes>\n";
  out << "    <nodes>\n";
  for (std::size_t i = 0; i < graph.node_count(); ++i) {
    out << "      <node id=\"" << xml_escape(graph.ids[i]) << "\" label=\""
        << xml_escape(graph.labels[i]) << "\">\n";
    out << "        <attvalues><attvalue for=\"0\" value=\""
        << partition.community[i] << "\"/></attvalues>\n";
    out << "      </node>\n";
  }
  out << "    </nodes>\n";
  out << "    <edges>\n";
  for (std::size_t e = 0; e < graph.edges.size(); ++e) {
    const GraphEdge& edge = graph.edges[e];
    out << "      <edge id=\"" << e << "\" source=\""
        << xml_escape(graph.ids[edge.u]) << "\" target=\""
        << xml_escape(graph.ids[edge.v]) << "\" weight=\""
        << fmt_double(edge.weight) << "\"/>\n";
  }
  out << "    </edges>\n";
  out << "  </graph>\n";
  out << "</gexf>\n";
  if (!out) throw DataError("short write on gexf file: " + path);
}

ImportedGexf import_gexf(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open gexf file: " + path);

  ImportedGexf imported;
  std::map<std::string, std::size_t> index;
  std::string line;
  std::string pending_node_id;
  bool have_pending_node = false;
  while (std::getline(in, line)) {
    if (line.find("<node ") != std::string::npos) {
      std::string id, label;
      if (!xml_attribute(line, "id", &id)) {
        throw DataError(path + ": node without id");
      }
      xml_attribute(line, "label", &label);
      index.emplace(id, imported.graph.ids.size());
      imported.graph.ids.push_back(id);
      imported.graph.labels.push_back(label);
      imported.partition.community.push_back(0);
      pending_node_id = id;
      have_pending_node = true;
    } else if (line.find("<attvalue ") != std::string::npos &&
               have_pending_node) {
      std::string value;
      if (xml_attribute(line, "value", &value)) {
        imported.partition.community[index.at(pending_node_id)] =
            std::stoi(value);
      }
    } else if (line.find("<edge ") != std::string::npos) {
      std::string source, target, weight;
      if (!xml_attribute(line, "source", &source) ||
          !xml_attribute(line, "target", &target) ||
          !xml_attribute(line, "weight", &weight)) {
        throw DataError(path + ": edge missing source/target/weight");
      }
      GraphEdge edge;
      edge.u = index.at(source);
      edge.v = index.at(target);
      if (edge.u > edge.v) std::swap(edge.u, edge.v);
      edge.weight = parse_double(weight);
      imported.graph.edges.push_back(edge);
    }
  }
  return imported;
}

std::vector<Assignment> read_assignments_csv(const std::string& path) {
  const CsvTable table = read_csv(path);
  const std::size_t job_id = table.column("job_id");
  const std::size_t job_label = table.column("job_label");
  const std::size_t skill_id = table.column("skill_id");
  const std::size_t skill_label = table.column("skill_label");
  std::vector<Assignment> assignments;
  assignments.reserve(table.rows.size());
  for (const std::vector<std::string>& row : table.rows) {
    Assignment a;
    a.job_id = row[job_id];
    a.job_label = row[job_label];
    a.skill_id = row[skill_id];
    a.skill_label = row[skill_label];
    if (a.job_id.empty() || a.skill_id.empty()) {
      throw DataError(path + ": empty job_id or skill_id");
    }
    assignments.push_back(std::move(a));
  }
  return assignments;
}

void write_partition_tsv(
    const CoocGraph& graph, const Partition& partition, const std::string& path,
    const std::vector<std::pair<std::string, std::string>>& provenance) {
  check_partition(graph, partition.community);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write partition file: " + path);
  for (const auto& [key, value] : provenance) {
    out << "# " << key << " = " << value << "\n";
  }
  out << "node_id\tcommunity\tdegree\n";
  const std::vector<double> degrees = graph.weighted_degrees();
  for (std::size_t i = 0; i < graph.node_count(); ++i) {
    out << graph.ids[i] << '\t' << partition.community[i] << '\t'
        << fmt_double(degrees[i]) << '\n';
  }
}

}  // namespace skillner
