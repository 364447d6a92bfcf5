#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "hgbs/common.hpp"

namespace hgbs {

/// Binding-interaction graph: symmetric 0/1 adjacency with zero diagonal and
/// a non-negative weight per node. Nodes stand for ligand/receptor
/// pharmacophore contacts; edges join contacts that can coexist.
struct InteractionGraph {
  RMatrix adjacency;
  RVector weights;
  std::vector<std::string> labels;  // empty or one per node
  std::string name;

  int node_count() const { return static_cast<int>(adjacency.rows()); }
  bool has_edge(int i, int j) const { return adjacency(i, j) != 0.0; }
  int edge_count() const;

  /// Throws InputError naming the first offending entry.
  void validate() const;

  /// M nodes, no edges, zero weights.
  static InteractionGraph empty(int node_count);
};

enum class GraphFormat { json };

InteractionGraph load_graph(std::istream& source, GraphFormat format = GraphFormat::json);
InteractionGraph load_graph_file(const std::string& path);
InteractionGraph graph_from_json(const nlohmann::json& doc);
nlohmann::json graph_to_json(const InteractionGraph& graph);
void write_graph(std::ostream& out, const InteractionGraph& graph);

/// Erdős–Rényi G(M, p): each unordered pair is an edge with probability p.
InteractionGraph random_graph(int node_count, double edge_probability, std::uint64_t seed);

/// G(M, p) background with a clique planted on `clique_size` random nodes.
/// Planted nodes get weights in [0.9, 1.0], the rest in [0, light_max].
InteractionGraph planted_clique_graph(int node_count, int clique_size, double edge_probability,
                                      std::uint64_t seed, double light_max = 0.2);

/// Largest eigenvalue of a real symmetric matrix.
double top_eigenvalue(const RMatrix& symmetric);

/// c = t / λ₁(A). Throws InputError when A has no edges.
double choose_c(const InteractionGraph& graph, double safety_factor = 0.5);

/// Like choose_c, but against the weighted matrix diag(1+w) A diag(1+w),
/// so the weighted kernel lands at spectral radius t.
double choose_c_weighted(const InteractionGraph& graph, double safety_factor = 0.5);

/// Ω = c·diag(1+w) and the weighted adjacency ΩAΩ.
///
/// The Gaussian kernel block built from this encoding is ΩAΩ / c, i.e.
/// c·D A D with D = diag(1+w); for w = 0 it is the plain c·A.
struct WeightedEncoding {
  double c = 0.0;
  RVector omega;
  RMatrix scaled_adjacency;
  RMatrix adjacency;

  /// D = Ω / c = diag(1 + w).
  RVector node_scale() const { return omega / c; }
  /// The block that enters the kernel, K = block ⊕ block.
  RMatrix kernel_block() const { return scaled_adjacency / c; }
};

/// Throws InputError if the kernel block would reach singular value ≥ 1.
WeightedEncoding weighted_encoding(const InteractionGraph& graph, double c);

}  // namespace hgbs
