#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "hgbs/graph.hpp"
#include "hgbs/hafnian.hpp"
#include "hgbs/sampler.hpp"

namespace hgbs {

using VertexSet = std::vector<int>;  // sorted node indices

bool is_clique(const InteractionGraph& graph, const VertexSet& vertices);

/// Sum of node weights over the set.
double clique_weight(const InteractionGraph& graph, const VertexSet& vertices);

/// Repeatedly drops the vertex of least induced degree (ties: smaller
/// weight, then smaller index) until the remainder is a clique.
VertexSet shrink_to_clique(const InteractionGraph& graph, const PhotonPattern& pattern);

/// Adds fully-connected vertices one at a time (heaviest, then lowest
/// index) until no candidate remains. Throws InputError if `clique` is not one.
VertexSet expand_clique(const InteractionGraph& graph, const VertexSet& clique);

struct CliqueReport {
  VertexSet vertex_set;
  double weight = 0.0;
  bool is_clique = true;
  PhotonPattern source_pattern;  // first (lexicographically smallest) pattern mapped here
};

struct CliqueFrequency {
  CliqueReport report;
  std::uint64_t frequency = 0;  // number of draws mapped to this clique
};

/// Shrink + expand every sampled pattern and merge identical results.
/// Sorted by weight desc, then frequency desc, then vertex set asc.
std::vector<CliqueFrequency> postprocess_samples(const InteractionGraph& graph,
                                                 const SampleHistogram& histogram);

/// Most frequent non-empty clique (ties: heavier, then lexicographically
/// smaller). Empty result when every draw mapped to the empty set.
VertexSet modal_clique(const std::vector<CliqueFrequency>& cliques);

struct MaxClique {
  VertexSet vertices;
  double weight = 0.0;
};

/// Exact maximum-weight clique; ties go to the larger, then lexicographically
/// smaller set. Throws InputError above 30 nodes.
MaxClique brute_force_max_clique(const InteractionGraph& graph);

/// CSV with columns `vertices` (semicolon-joined), `weight`, `frequency`.
void write_clique_csv(std::ostream& out, const std::vector<CliqueFrequency>& cliques,
                      const std::string& meta_comment);
std::string join_vertices(const VertexSet& v);

}  // namespace hgbs
