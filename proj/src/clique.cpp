#include "hgbs/clique.hpp"

#include <algorithm>
#include <bit>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

namespace hgbs {

namespace {

void check_vertices(const InteractionGraph& graph, const VertexSet& v) {
  for (int i : v)
    if (i < 0 || i >= graph.node_count()) throw InputError("vertex index out of range");
}

// Lexicographic comparison used for tie-breaks between equally good sets.
bool better(double wa, const VertexSet& a, double wb, const VertexSet& b) {
  if (wa != wb) return wa > wb;
  if (a.size() != b.size()) return a.size() > b.size();
  return a < b;
}

}  // namespace

bool is_clique(const InteractionGraph& graph, const VertexSet& vertices) {
  check_vertices(graph, vertices);
  for (std::size_t i = 0; i < vertices.size(); ++i)
    for (std::size_t j = i + 1; j < vertices.size(); ++j)
      if (!graph.has_edge(vertices[i], vertices[j])) return false;
  return true;
}

double clique_weight(const InteractionGraph& graph, const VertexSet& vertices) {
  check_vertices(graph, vertices);
  double w = 0.0;
  for (int i : vertices) w += graph.weights(i);
  return w;
}

VertexSet shrink_to_clique(const InteractionGraph& graph, const PhotonPattern& pattern) {
  if (pattern.mode_count() != graph.node_count()) throw InputError("pattern length does not match graph");
  VertexSet set = pattern.occupied();
  while (!is_clique(graph, set)) {
    std::size_t drop = 0;
    int best_deg = -1;
    for (std::size_t i = 0; i < set.size(); ++i) {
      int deg = 0;
      for (int u : set) deg += (u != set[i] && graph.has_edge(set[i], u)) ? 1 : 0;
      const bool take = best_deg < 0 || deg < best_deg ||
                        (deg == best_deg && graph.weights(set[i]) < graph.weights(set[drop]));
      if (take) {
        best_deg = deg;
        drop = i;
      }
    }
    set.erase(set.begin() + static_cast<std::ptrdiff_t>(drop));
  }
  return set;
}

VertexSet expand_clique(const InteractionGraph& graph, const VertexSet& clique) {
  if (!is_clique(graph, clique)) throw InputError("expand_clique input is not a clique");
  VertexSet set = clique;
  std::sort(set.begin(), set.end());
  const int m = graph.node_count();
  for (;;) {
    int pick = -1;
    for (int v = 0; v < m; ++v) {
      if (std::binary_search(set.begin(), set.end(), v)) continue;
      bool joined = true;
      for (int u : set) joined = joined && graph.has_edge(u, v);
      if (!joined) continue;
      if (pick < 0 || graph.weights(v) > graph.weights(pick)) pick = v;
    }
    if (pick < 0) return set;
    set.insert(std::upper_bound(set.begin(), set.end(), pick), pick);
  }
}

std::vector<CliqueFrequency> postprocess_samples(const InteractionGraph& graph,
                                                 const SampleHistogram& histogram) {
  std::map<VertexSet, CliqueFrequency> merged;
  for (const auto& [pattern, count] : histogram.counts) {
    if (count == 0) continue;
    VertexSet shrunk = shrink_to_clique(graph, pattern);
    // An empty sample stays empty; anything else grows to a maximal clique.
    VertexSet final_set = shrunk.empty() ? shrunk : expand_clique(graph, shrunk);
    auto [it, fresh] = merged.try_emplace(final_set);
    if (fresh) {
      it->second.report.vertex_set = final_set;
      it->second.report.weight = clique_weight(graph, final_set);
      it->second.report.is_clique = true;
      it->second.report.source_pattern = pattern;
    }
    it->second.frequency += count;
  }
  std::vector<CliqueFrequency> out;
  out.reserve(merged.size());
  for (auto& [_, cf] : merged) out.push_back(std::move(cf));
  std::sort(out.begin(), out.end(), [](const CliqueFrequency& a, const CliqueFrequency& b) {
    if (a.report.weight != b.report.weight) return a.report.weight > b.report.weight;
    if (a.frequency != b.frequency) return a.frequency > b.frequency;
    return a.report.vertex_set < b.report.vertex_set;
  });
  return out;
}

VertexSet modal_clique(const std::vector<CliqueFrequency>& cliques) {
  const CliqueFrequency* best = nullptr;
  for (const auto& c : cliques) {
    if (c.report.vertex_set.empty()) continue;
    if (best == nullptr || c.frequency > best->frequency ||
        (c.frequency == best->frequency &&
         better(c.report.weight, c.report.vertex_set, best->report.weight,
                best->report.vertex_set)))
      best = &c;
  }
  return best ? best->report.vertex_set : VertexSet{};
}

MaxClique brute_force_max_clique(const InteractionGraph& graph) {
  const int m = graph.node_count();
  if (m > 30) throw InputError("brute-force clique search budget exceeded (M > 30)");
  std::vector<std::uint32_t> nbr(m, 0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (i != j && graph.has_edge(i, j)) nbr[i] |= 1u << j;

  MaxClique best;
  auto to_set = [m](std::uint32_t bits) {
    VertexSet v;
    for (int i = 0; i < m; ++i)
      if (bits >> i & 1u) v.push_back(i);
    return v;
  };
  // Bron–Kerbosch with pivoting over maximal cliques; with non-negative
  // weights some maximal clique is always a maximum-weight one.
  auto bk = [&](auto&& self, std::uint32_t r, std::uint32_t p, std::uint32_t x) -> void {
    if (p == 0 && x == 0) {
      VertexSet v = to_set(r);
      const double w = clique_weight(graph, v);
      if (best.vertices.empty() || better(w, v, best.weight, best.vertices)) {
        best.vertices = std::move(v);
        best.weight = w;
      }
      return;
    }
    const std::uint32_t px = p | x;
    int pivot = 0;
    int pivot_deg = -1;
    for (int u = 0; u < m; ++u)
      if (px >> u & 1u) {
        const int deg = std::popcount(p & nbr[u]);
        if (deg > pivot_deg) {
          pivot_deg = deg;
          pivot = u;
        }
      }
    std::uint32_t cand = p & ~nbr[pivot];
    for (int v = 0; v < m; ++v) {
      if (!(cand >> v & 1u)) continue;
      const std::uint32_t bit = 1u << v;
      self(self, r | bit, p & nbr[v], x & nbr[v]);
      p &= ~bit;
      x |= bit;
    }
  };
  if (m > 0) bk(bk, 0u, m == 32 ? ~0u : ((1u << m) - 1u), 0u);
  return best;
}

std::string join_vertices(const VertexSet& v) {
  std::ostringstream s;
  for (std::size_t i = 0; i < v.size(); ++i) s << (i ? ";" : "") << v[i];
  return s.str();
}

void write_clique_csv(std::ostream& out, const std::vector<CliqueFrequency>& cliques,
                      const std::string& meta_comment) {
  if (!meta_comment.empty()) out << "# " << meta_comment << "\n";
  out << "vertices,weight,frequency\n" << std::setprecision(12);
  for (const auto& c : cliques)
    out << join_vertices(c.report.vertex_set) << "," << c.report.weight << "," << c.frequency
        << "\n";
}

}  // namespace hgbs
