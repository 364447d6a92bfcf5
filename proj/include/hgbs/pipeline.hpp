#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hgbs/clique.hpp"
#include "hgbs/config.hpp"
#include "hgbs/encoding.hpp"
#include "hgbs/graph.hpp"
#include "hgbs/mps.hpp"
#include "hgbs/sampler.hpp"

namespace hgbs {

/// Process exit codes.
enum ExitCode : int { kExitOk = 0, kExitValidation = 1, kExitInput = 2 };

/// Graph from `graph` or `random`; InputError when neither (or both) is set.
InteractionGraph resolve_graph(const RunConfig& config);

/// Graph → c, weighted encoding, kernel, covariance and Takagi factors.
/// c is chosen against diag(1+w) A diag(1+w), which reduces to t/λ₁(A)
/// for unweighted graphs.
struct EncodedGraph {
  InteractionGraph graph;
  WeightedEncoding encoding;
  KernelMatrix kernel;
  GaussianState state;
  TakagiFactors takagi;
};

EncodedGraph encode_graph(const InteractionGraph& graph, double safety_factor);

FitConfig fit_config_from(const RunConfig& config);

/// One-layer fit, plus a two-layer fit warm-started from it when layers == 2.
struct LayerFits {
  FitResult one;
  std::optional<FitResult> two;
};

LayerFits fit_graph(const EncodedGraph& encoded, int layers, const FitConfig& fit);

/// Table 1 values (relative distance) for M ∈ {12,16,20,24,50}; nullopt otherwise.
std::optional<double> table1_reference(int mode_count, int layers);

struct Table1Entry {
  int mode_count = 0;
  int graph_index = 0;
  std::uint64_t graph_seed = 0;
  double one_layer = 0.0;
  double two_layer = 0.0;
};

struct Table1Summary {
  std::vector<Table1Entry> entries;
  /// Per size: median relative distance for 1 and 2 layers.
  struct Row {
    int mode_count;
    double median_one;
    double median_two;
  };
  std::vector<Row> rows;
};

/// Seeded G(M, p) ensemble, `graphs` per size, both layer counts.
Table1Summary run_table1(const RunConfig& config, std::ostream* progress = nullptr);

struct DockResult {
  EncodedGraph encoded;
  PatternDistribution distribution;
  SampleHistogram histogram;
  std::vector<CliqueFrequency> cliques;
  VertexSet modal;
  std::optional<MaxClique> oracle;  // when M ≤ 30
};

/// Encode, enumerate, sample and post-process.
DockResult run_dock(const InteractionGraph& graph, const RunConfig& config);

// Subcommands. Each writes its artifacts under config.out and a short report
// to `log`; the return value is the process exit code. Module errors
// propagate as exceptions (InputError → 2, anything else → 1 in main).
int cmd_encode(const RunConfig& config, std::ostream& log);
int cmd_sample(const RunConfig& config, std::ostream& log);
int cmd_fit(const RunConfig& config, std::ostream& log);
int cmd_validate(const RunConfig& config, std::ostream& log);
int cmd_table1(const RunConfig& config, std::ostream& log);
int cmd_dock(const RunConfig& config, std::ostream& log);

}  // namespace hgbs
