#include "hgbs/graph.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "hgbs/rng.hpp"

namespace hgbs {

namespace {

std::string loc(int i, int j) {
  std::ostringstream s;
  s << "(" << i << "," << j << ")";
  return s.str();
}

// Largest singular value of a real symmetric matrix = spectral radius.
double spectral_radius(const RMatrix& symmetric) {
  if (symmetric.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<RMatrix> es(symmetric, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace

int InteractionGraph::edge_count() const {
  int count = 0;
  for (int i = 0; i < node_count(); ++i)
    for (int j = i + 1; j < node_count(); ++j)
      if (has_edge(i, j)) ++count;
  return count;
}

void InteractionGraph::validate() const {
  const int m = node_count();
  if (m < 1) throw InputError("graph must have at least one node");
  if (adjacency.cols() != m) throw InputError("adjacency must be square");
  if (weights.size() != m) throw InputError("weights length must equal node count");
  if (!labels.empty() && static_cast<int>(labels.size()) != m)
    throw InputError("labels length must equal node count");
  for (int i = 0; i < m; ++i) {
    if (adjacency(i, i) != 0.0) throw InputError("nonzero diagonal at " + std::to_string(i));
    for (int j = 0; j < m; ++j) {
      const double a = adjacency(i, j);
      if (a != 0.0 && a != 1.0) throw InputError("non-binary adjacency entry at " + loc(i, j));
      if (a != adjacency(j, i)) throw InputError("asymmetric adjacency at " + loc(i, j));
    }
    if (!std::isfinite(weights(i))) throw InputError("non-finite weight at " + std::to_string(i));
    if (weights(i) < 0.0) throw InputError("negative weight at " + std::to_string(i));
  }
}

InteractionGraph InteractionGraph::empty(int node_count) {
  if (node_count < 1) throw InputError("graph must have at least one node");
  InteractionGraph g;
  g.adjacency = RMatrix::Zero(node_count, node_count);
  g.weights = RVector::Zero(node_count);
  return g;
}

InteractionGraph graph_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw InputError("graph file must be a JSON object");
  static const char* known[] = {"nodes", "edges", "adjacency", "weights", "labels", "name",
                                "description"};
  for (const auto& [key, _] : doc.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) throw InputError("unknown graph key '" + key + "'");
  }
  if (!doc.contains("nodes") || !doc["nodes"].is_number_integer())
    throw InputError("graph file needs integer key 'nodes'");
  const int m = doc["nodes"].get<int>();
  InteractionGraph g = InteractionGraph::empty(m);

  if (doc.contains("edges") && doc.contains("adjacency"))
    throw InputError("give either 'edges' or 'adjacency', not both");
  if (doc.contains("edges")) {
    const auto& edges = doc["edges"];
    if (!edges.is_array()) throw InputError("'edges' must be a list of [i,j] pairs");
    for (std::size_t k = 0; k < edges.size(); ++k) {
      const auto& e = edges[k];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() ||
          !e[1].is_number_integer())
        throw InputError("edge " + std::to_string(k) + " is not an [i,j] integer pair");
      const int i = e[0].get<int>();
      const int j = e[1].get<int>();
      if (i < 0 || j < 0 || i >= m || j >= m)
        throw InputError("edge " + std::to_string(k) + " " + loc(i, j) + " out of range");
      g.adjacency(i, j) = 1.0;
      g.adjacency(j, i) = 1.0;
    }
  } else if (doc.contains("adjacency")) {
    const auto& rows = doc["adjacency"];
    if (!rows.is_array() || static_cast<int>(rows.size()) != m)
      throw InputError("'adjacency' must have " + std::to_string(m) + " rows");
    for (int i = 0; i < m; ++i) {
      if (!rows[i].is_array() || static_cast<int>(rows[i].size()) != m)
        throw InputError("adjacency row " + std::to_string(i) + " has wrong length");
      for (int j = 0; j < m; ++j) {
        if (!rows[i][j].is_number()) throw InputError("non-numeric adjacency at " + loc(i, j));
        g.adjacency(i, j) = rows[i][j].get<double>();
      }
    }
  }
  if (doc.contains("weights")) {
    const auto& w = doc["weights"];
    if (!w.is_array() || static_cast<int>(w.size()) != m)
      throw InputError("'weights' must list " + std::to_string(m) + " numbers");
    for (int i = 0; i < m; ++i) {
      if (!w[i].is_number()) throw InputError("non-numeric weight at " + std::to_string(i));
      g.weights(i) = w[i].get<double>();
    }
  }
  if (doc.contains("labels")) {
    const auto& l = doc["labels"];
    if (!l.is_array() || static_cast<int>(l.size()) != m)
      throw InputError("'labels' must list " + std::to_string(m) + " strings");
    for (const auto& s : l) {
      if (!s.is_string()) throw InputError("labels must be strings");
      g.labels.push_back(s.get<std::string>());
    }
  }
  if (doc.contains("name")) g.name = doc["name"].get<std::string>();
  g.validate();
  return g;
}

InteractionGraph load_graph(std::istream& source, GraphFormat format) {
  switch (format) {
    case GraphFormat::json: {
      nlohmann::json doc;
      try {
        source >> doc;
      } catch (const nlohmann::json::parse_error& e) {
        throw InputError(std::string("graph parse failure: ") + e.what());
      }
      return graph_from_json(doc);
    }
  }
  throw InputError("unsupported graph format");
}

InteractionGraph load_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open graph file '" + path + "'");
  return load_graph(in);
}

nlohmann::json graph_to_json(const InteractionGraph& graph) {
  nlohmann::json doc;
  if (!graph.name.empty()) doc["name"] = graph.name;
  doc["nodes"] = graph.node_count();
  nlohmann::json edges = nlohmann::json::array();
  for (int i = 0; i < graph.node_count(); ++i)
    for (int j = i + 1; j < graph.node_count(); ++j)
      if (graph.has_edge(i, j)) edges.push_back({i, j});
  doc["edges"] = edges;
  doc["weights"] = std::vector<double>(graph.weights.data(),
                                       graph.weights.data() + graph.weights.size());
  if (!graph.labels.empty()) doc["labels"] = graph.labels;
  return doc;
}

void write_graph(std::ostream& out, const InteractionGraph& graph) {
  out << graph_to_json(graph).dump(2) << "\n";
}

InteractionGraph random_graph(int node_count, double edge_probability, std::uint64_t seed) {
  if (node_count < 2) throw InputError("random graph needs at least 2 nodes");
  if (!(edge_probability >= 0.0 && edge_probability <= 1.0))
    throw InputError("edge probability must lie in [0,1]");
  InteractionGraph g = InteractionGraph::empty(node_count);
  SplitMix64 rng(derive_seed(seed, "random_graph"));
  for (int i = 0; i < node_count; ++i)
    for (int j = i + 1; j < node_count; ++j)
      if (rng.uniform() < edge_probability) g.adjacency(i, j) = g.adjacency(j, i) = 1.0;
  std::ostringstream name;
  name << "er_" << node_count << "_" << edge_probability << "_" << seed;
  g.name = name.str();
  return g;
}

InteractionGraph planted_clique_graph(int node_count, int clique_size, double edge_probability,
                                      std::uint64_t seed, double light_max) {
  if (clique_size < 2 || clique_size > node_count)
    throw InputError("planted clique size must lie in [2, M]");
  InteractionGraph g = random_graph(node_count, edge_probability, seed);
  SplitMix64 rng(derive_seed(seed, "planted_clique"));
  std::vector<int> order(node_count);
  for (int i = 0; i < node_count; ++i) order[i] = i;
  for (int i = node_count - 1; i > 0; --i) {  // Fisher–Yates
    const int j = static_cast<int>(rng.next() % static_cast<std::uint64_t>(i + 1));
    std::swap(order[i], order[j]);
  }
  std::vector<bool> planted(node_count, false);
  for (int k = 0; k < clique_size; ++k) planted[order[k]] = true;
  for (int i = 0; i < node_count; ++i) {
    for (int j = 0; j < node_count; ++j)
      if (i != j && planted[i] && planted[j]) g.adjacency(i, j) = 1.0;
    g.weights(i) = planted[i] ? rng.uniform(0.9, 1.0) : rng.uniform(0.0, light_max);
  }
  std::ostringstream name;
  name << "planted_" << node_count << "_k" << clique_size << "_" << edge_probability << "_" << seed;
  g.name = name.str();
  return g;
}

double top_eigenvalue(const RMatrix& symmetric) {
  if (symmetric.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<RMatrix> es(symmetric, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

namespace {

double c_for(const RMatrix& m, double t) {
  if (!(t > 0.0 && t < 1.0)) throw InputError("safety factor must lie in (0,1)");
  const double lambda = top_eigenvalue(m);
  if (!(lambda > 1e-12)) throw InputError("zero adjacency; no encoding exists");
  return t / lambda;
}

}  // namespace

double choose_c(const InteractionGraph& graph, double safety_factor) {
  return c_for(graph.adjacency, safety_factor);
}

double choose_c_weighted(const InteractionGraph& graph, double safety_factor) {
  const RVector d = RVector::Ones(graph.node_count()) + graph.weights;
  return c_for(d.asDiagonal() * graph.adjacency * d.asDiagonal(), safety_factor);
}

WeightedEncoding weighted_encoding(const InteractionGraph& graph, double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw InputError("rescaling constant c must be positive");
  WeightedEncoding enc;
  enc.c = c;
  enc.adjacency = graph.adjacency;
  enc.omega = c * (RVector::Ones(graph.node_count()) + graph.weights);
  enc.scaled_adjacency = enc.omega.asDiagonal() * graph.adjacency * enc.omega.asDiagonal();
  if (spectral_radius(enc.kernel_block()) >= 1.0)
    throw InputError("weights too large for valid Gaussian; reduce c");
  return enc;
}

}  // namespace hgbs
