#include "hgbs/pipeline.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "hgbs/fock.hpp"
#include "hgbs/holo.hpp"
#include "hgbs/rng.hpp"
#include "hgbs/serialize.hpp"

namespace hgbs {

namespace fs = std::filesystem;

namespace {

fs::path prepare_out(const RunConfig& config) {
  fs::path dir(config.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw InputError("cannot create output directory " + config.out + ": " + ec.message());
  return dir;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  return out;
}

nlohmann::json stamped(nlohmann::json doc, const RunConfig& config) {
  doc["config_hash"] = config.hash();
  doc["seed"] = config.seed;
  return doc;
}

std::string meta_line(const RunConfig& config, const std::string& extra) {
  std::ostringstream s;
  s << "config_hash=" << config.hash() << " seed=" << config.seed;
  if (!extra.empty()) s << " " << extra;
  return s.str();
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string fmt(double x, int precision = 6) {
  std::ostringstream s;
  s << std::setprecision(precision) << x;
  return s.str();
}

}  // namespace

InteractionGraph resolve_graph(const RunConfig& config) {
  if (!config.graph.empty() && config.random)
    throw InputError("give either --graph or --random, not both");
  if (!config.graph.empty()) return load_graph_file(config.graph);
  if (config.random)
    return random_graph(config.random->node_count, config.random->edge_probability,
                        config.random->seed);
  throw InputError("no graph: pass --graph FILE or --random M,p,seed");
}

EncodedGraph encode_graph(const InteractionGraph& graph, double safety_factor) {
  graph.validate();
  EncodedGraph e;
  e.graph = graph;
  const double c = choose_c_weighted(graph, safety_factor);
  e.encoding = weighted_encoding(graph, c);
  e.kernel = kernel_from_graph(e.encoding);
  e.state = covariance_from_kernel(e.kernel);
  e.takagi = takagi(e.encoding.kernel_block() / c, c);
  return e;
}

FitConfig fit_config_from(const RunConfig& config) {
  FitConfig f;
  f.restarts = config.restarts;
  f.seed = config.seed;
  f.cg.max_iterations = config.max_iterations;
  f.cg.relative_tolerance = config.tolerance;
  return f;
}

LayerFits fit_graph(const EncodedGraph& encoded, int layers, const FitConfig& fit) {
  const int m = encoded.graph.node_count();
  const auto& r = encoded.takagi.signed_squeeze_params;
  LayerFits out;
  out.one = fit_parameters(build_circuit(m, 1, r), encoded.state, fit);
  if (layers == 2) {
    FitConfig two = fit;
    two.extra_starts.push_back(embed_one_layer_start(out.one, m - 1));
    out.two = fit_parameters(build_circuit(m, 2, r), encoded.state, two);
  }
  return out;
}

std::optional<double> table1_reference(int mode_count, int layers) {
  struct Ref {
    int m;
    double one, two;
  };
  static constexpr Ref refs[] = {
      {12, 0.05, 0.04}, {16, 0.04, 0.04}, {20, 0.04, 0.03}, {24, 0.03, 0.02}, {50, 0.02, 0.01}};
  for (const auto& ref : refs)
    if (ref.m == mode_count) return layers == 1 ? ref.one : ref.two;
  return std::nullopt;
}

Table1Summary run_table1(const RunConfig& config, std::ostream* progress) {
  Table1Summary summary;
  const FitConfig fit = fit_config_from(config);
  for (int m : config.sizes) {
    std::vector<double> ones;
    std::vector<double> twos;
    for (int g = 0; g < config.graphs; ++g) {
      const std::uint64_t gseed =
          derive_seed(config.seed, "table1_" + std::to_string(m) + "_" + std::to_string(g));
      const auto encoded = encode_graph(random_graph(m, config.p, gseed), config.t);
      const auto fits = fit_graph(encoded, 2, fit);
      Table1Entry e{m, g, gseed, fits.one.relative_distance, fits.two->relative_distance};
      summary.entries.push_back(e);
      ones.push_back(e.one_layer);
      twos.push_back(e.two_layer);
      if (progress)
        *progress << "  M=" << m << " graph " << g << ": 1-layer " << fmt(e.one_layer)
                  << ", 2-layer " << fmt(e.two_layer) << std::endl;
    }
    summary.rows.push_back({m, median(ones), median(twos)});
  }
  return summary;
}

DockResult run_dock(const InteractionGraph& graph, const RunConfig& config) {
  DockResult d{encode_graph(graph, config.t), {}, {}, {}, {}, std::nullopt};
  EnumerationOptions opt;
  opt.max_photons = std::min(config.nmax, graph.node_count() / 2 * 2);
  opt.work_budget = config.budget;
  d.distribution = enumerate_distribution(make_graph_bundle(d.encoded.encoding), opt);
  d.histogram = draw_samples(d.distribution, config.shots, derive_seed(config.seed, "sample"));
  d.cliques = postprocess_samples(graph, d.histogram);
  d.modal = modal_clique(d.cliques);
  if (graph.node_count() <= 30) d.oracle = brute_force_max_clique(graph);
  return d;
}

int cmd_encode(const RunConfig& config, std::ostream& log) {
  const auto graph = resolve_graph(config);
  const auto e = encode_graph(graph, config.t);
  const auto dir = prepare_out(config);
  nlohmann::json info = {{"graph", graph.name}, {"mode_count", graph.node_count()},
                         {"c", e.encoding.c}, {"safety_factor", config.t}};
  auto with_info = [&](nlohmann::json doc) {
    doc.update(info);
    return stamped(std::move(doc), config);
  };
  write_json_file((dir / "kernel.json").string(), with_info(kernel_to_json(e.kernel)));
  write_json_file((dir / "covariance.json").string(), with_info(covariance_to_json(e.state)));
  write_json_file((dir / "takagi.json").string(), with_info(takagi_to_json(e.takagi)));
  log << "encoded " << (graph.name.empty() ? "graph" : graph.name) << ": M=" << graph.node_count()
      << " c=" << fmt(e.encoding.c, 10) << " max r=" << fmt(e.takagi.squeeze_params.maxCoeff())
      << "\n"
      << "wrote kernel.json, covariance.json, takagi.json to " << dir.string() << "\n";
  return kExitOk;
}

int cmd_sample(const RunConfig& config, std::ostream& log) {
  const auto graph = resolve_graph(config);
  const auto d = run_dock(graph, config);
  const auto dir = prepare_out(config);
  const std::string meta = meta_line(config, "graph=" + graph.name);
  {
    auto out = open_out(dir / "histogram.csv");
    write_histogram_csv(out, d.histogram, d.distribution, meta);
  }
  write_json_file((dir / "histogram.json").string(),
                  stamped(histogram_to_json(d.histogram, d.distribution), config));
  {
    auto out = open_out(dir / "cliques.csv");
    write_clique_csv(out, d.cliques, meta);
  }
  log << "sampled " << d.histogram.total_draws << " patterns over " << d.distribution.entries.size()
      << " enumerated (leakage " << fmt(d.distribution.leakage) << ")\n";
  if (!d.cliques.empty())
    log << "heaviest sampled clique: {" << join_vertices(d.cliques.front().report.vertex_set)
        << "} weight " << fmt(d.cliques.front().report.weight) << "\n";
  if (d.oracle)
    log << "brute-force maximum clique: {" << join_vertices(d.oracle->vertices) << "} weight "
        << fmt(d.oracle->weight) << "\n";
  return kExitOk;
}

int cmd_dock(const RunConfig& config, std::ostream& log) {
  const auto graph = resolve_graph(config);
  const auto d = run_dock(graph, config);
  const auto dir = prepare_out(config);
  const std::string meta = meta_line(config, "graph=" + graph.name);
  {
    auto out = open_out(dir / "histogram.csv");
    write_histogram_csv(out, d.histogram, d.distribution, meta);
  }
  {
    auto out = open_out(dir / "cliques.csv");
    write_clique_csv(out, d.cliques, meta);
  }
  nlohmann::json top = nlohmann::json::array();
  for (std::size_t i = 0; i < d.cliques.size() && top.size() < 3; ++i) {
    const auto& c = d.cliques[i];
    if (c.report.vertex_set.empty()) continue;
    nlohmann::json labels = nlohmann::json::array();
    for (int v : c.report.vertex_set)
      labels.push_back(graph.labels.empty() ? std::to_string(v) : graph.labels[v]);
    top.push_back({{"vertices", c.report.vertex_set},
                   {"labels", labels},
                   {"weight", c.report.weight},
                   {"frequency", c.frequency}});
  }
  nlohmann::json report = {{"graph", graph.name},
                           {"mode_count", graph.node_count()},
                           {"c", d.encoded.encoding.c},
                           {"shots", d.histogram.total_draws},
                           {"leakage", d.distribution.leakage},
                           {"top_cliques", top},
                           {"modal_clique", d.modal}};
  if (d.oracle)
    report["oracle"] = {{"vertices", d.oracle->vertices}, {"weight", d.oracle->weight}};
  write_json_file((dir / "dock.json").string(), stamped(report, config));

  log << "graph " << graph.name << " (M=" << graph.node_count() << "), " << d.histogram.total_draws
      << " shots, leakage " << fmt(d.distribution.leakage) << "\n";
  log << "top clique weights:";
  for (const auto& t : top) log << " " << fmt(t["weight"].get<double>(), 4);
  log << "\nmodal clique: {" << join_vertices(d.modal) << "}\n";
  if (d.oracle)
    log << "brute-force maximum clique: {" << join_vertices(d.oracle->vertices) << "} weight "
        << fmt(d.oracle->weight) << (d.oracle->vertices == d.modal ? " (matches modal)" : "")
        << "\n";
  return kExitOk;
}

int cmd_fit(const RunConfig& config, std::ostream& log) {
  std::vector<std::pair<InteractionGraph, std::uint64_t>> graphs;
  if (!config.graph.empty() || config.random) {
    graphs.emplace_back(resolve_graph(config), config.seed);
  } else {
    for (int m : config.sizes) {
      const auto gseed = derive_seed(config.seed, "table1_" + std::to_string(m) + "_0");
      graphs.emplace_back(random_graph(m, config.p, gseed), gseed);
    }
  }
  const auto dir = prepare_out(config);
  auto csv = open_out(dir / "fit.csv");
  csv << "# " << meta_line(config, "") << "\n"
      << "M,layers,relative_distance,final_distance,seed,graph\n"
      << std::setprecision(10);
  nlohmann::json results = nlohmann::json::array();
  const FitConfig fit = fit_config_from(config);
  for (const auto& [graph, gseed] : graphs) {
    const auto e = encode_graph(graph, config.t);
    const auto fits = fit_graph(e, config.layers, fit);
    std::vector<std::pair<int, const FitResult*>> rows{{1, &fits.one}};
    if (fits.two) rows.emplace_back(2, &*fits.two);
    for (const auto& [layers, r] : rows) {
      csv << graph.node_count() << "," << layers << "," << r->relative_distance << ","
          << r->final_distance << "," << config.seed << "," << graph.name << "\n";
      auto j = fit_result_to_json(*r);
      j["mode_count"] = graph.node_count();
      j["layers"] = layers;
      j["graph"] = graph.name;
      results.push_back(j);
      log << "M=" << graph.node_count() << " layers=" << layers
          << " relative distance " << fmt(r->relative_distance) << "\n";
    }
  }
  write_json_file((dir / "fit.json").string(), stamped({{"fits", results}}, config));
  return kExitOk;
}

int cmd_table1(const RunConfig& config, std::ostream& log) {
  log << "Table 1 ensemble: " << config.graphs << " G(M, " << config.p << ") graphs per size\n";
  const auto summary = run_table1(config, &log);
  const auto dir = prepare_out(config);
  {
    auto raw = open_out(dir / "table1_raw.csv");
    raw << "# " << meta_line(config, "") << "\n"
        << "M,graph_index,graph_seed,layers,relative_distance\n"
        << std::setprecision(10);
    for (const auto& e : summary.entries) {
      raw << e.mode_count << "," << e.graph_index << "," << e.graph_seed << ",1," << e.one_layer
          << "\n";
      raw << e.mode_count << "," << e.graph_index << "," << e.graph_seed << ",2," << e.two_layer
          << "\n";
    }
  }
  auto csv = open_out(dir / "table1.csv");
  csv << "# " << meta_line(config, "") << "\n"
      << "M,layers,median_relative_distance,reference,within_2x\n"
      << std::setprecision(10);
  log << "   M  layers  median   reference\n";
  for (const auto& row : summary.rows)
    for (int layers : {1, 2}) {
      const double med = layers == 1 ? row.median_one : row.median_two;
      const auto ref = table1_reference(row.mode_count, layers);
      csv << row.mode_count << "," << layers << "," << med << ","
          << (ref ? fmt(*ref) : std::string("")) << ","
          << (ref ? (med <= 2.0 * *ref ? "yes" : "no") : "") << "\n";
      log << std::setw(4) << row.mode_count << std::setw(8) << layers << "  " << std::setw(8)
          << fmt(med, 4) << "  " << (ref ? fmt(*ref) : std::string("-")) << "\n";
    }
  return kExitOk;
}

namespace {

struct Check {
  std::string name;
  bool passed;
  double residual;
  double tolerance;
  std::string note;
};

// Exact binary probabilities from Takagi + Fock against the hafnian formula.
double oracle_residual(const InteractionGraph& graph, double c, int cutoff) {
  const auto enc = weighted_encoding(graph, c);
  const auto bundle = make_graph_bundle(enc);
  EnumerationOptions opt;
  opt.max_photons = graph.node_count() / 2 * 2;
  const auto haf = enumerate_distribution(bundle, opt);
  const auto fock = photon_distribution(gbs_state(takagi(enc.kernel_block() / c, c), cutoff));
  double worst = 0.0;
  const int m = graph.node_count();
  for (std::uint32_t bits = 0; bits < (1u << m); ++bits) {
    std::vector<int> occ(m);
    for (int j = 0; j < m; ++j) occ[j] = static_cast<int>(bits >> (m - 1 - j) & 1u);
    std::vector<std::uint8_t> b(occ.begin(), occ.end());
    worst = std::max(worst, std::abs(haf.probability(PhotonPattern(b)) - fock.probability(occ)));
  }
  return worst;
}

// Tail of Σ n P(n) and of the ⟨a²⟩ series beyond the cutoff, for r.
std::pair<double, double> squeezed_tails(double r, int cutoff) {
  const double t = std::tanh(r);
  double tail_n = 0.0;
  double tail_a2 = 0.0;
  // ψ_{2k} = (−1)^0 … amplitudes with |ψ_{2k}|² = C(2k,k)/4^k · t^{2k}/cosh r.
  for (int k = 0; k < 2000; ++k) {
    const int n = 2 * k;
    const double log_c = std::lgamma(n + 1.0) - 2.0 * std::lgamma(k + 1.0) - n * std::log(2.0);
    const double pn = std::exp(log_c + n * std::log(t)) / std::cosh(r);
    if (n >= cutoff) tail_n += n * pn;
    if (n + 2 >= cutoff) {
      const double pn2 = std::exp(std::lgamma(n + 3.0) - 2.0 * std::lgamma(k + 2.0) -
                                  (n + 2) * std::log(2.0) + (n + 2) * std::log(t)) /
                         std::cosh(r);
      tail_a2 += std::sqrt(pn * pn2 * (n + 1.0) * (n + 2.0));
    }
    if (n > cutoff && pn < 1e-30) break;
  }
  return {tail_n, tail_a2};
}

}  // namespace

int cmd_validate(const RunConfig& config, std::ostream& log) {
  std::vector<Check> checks;
  std::vector<std::string> warnings;

  if (!config.covariance.empty()) {
    // Schema and physicality problems surface as InputError (exit 2).
    const auto state = covariance_from_json(read_json_file(config.covariance));
    checks.push_back({"covariance_file", true, state.structure_residual(), 1e-10,
                      "min sigma_Q eigenvalue " + fmt(state.min_sigma_q_eigenvalue())});
  }

  // Hafnian formula vs exact Fock simulation (binary patterns, cutoff 10).
  {
    InteractionGraph two = InteractionGraph::empty(2);
    two.adjacency << 0, 1, 1, 0;
    double worst = oracle_residual(two, 0.5, 10);
    for (int i = 0; i < 3; ++i) {
      const int m = 3 + i % 2;
      const auto g = random_graph(m, 0.7, derive_seed(config.seed, "validate_graph_" + std::to_string(i)));
      if (g.edge_count() == 0) continue;
      worst = std::max(worst, oracle_residual(g, choose_c(g, config.t), 10));
    }
    checks.push_back({"hafnian_vs_fock", worst <= 1e-6, worst, 1e-6, "cutoff 10"});
  }

  // Squeezed-mode moments vs Bogoliubov values, allowing for the analytic tail.
  {
    const int d = 20;
    const double r = std::min(config.squeeze, 0.6);
    const auto s = apply_squeeze(FockState::vacuum(1, d), 0, r);
    const auto [tail_n, tail_a2] = squeezed_tails(r, d);
    const double dn = std::abs(expect_adag_a(s, 0, 0).real() - std::sinh(r) * std::sinh(r));
    const double da2 = std::abs(expect_aa(s, 0, 0) - std::cosh(r) * std::sinh(r));
    const double excess = std::max(dn - tail_n, da2 - tail_a2);
    checks.push_back({"squeezed_moments", excess <= 1e-8, std::max(dn, da2), 1e-8 + std::max(tail_n, tail_a2),
                      "d=20, r=" + fmt(r)});
  }

  // Holographic schedule vs static circuit, M = 4.
  SplitMix64 rng(derive_seed(config.seed, "validate_params"));
  RVector r(4);
  r << 1.0, 0.75, 0.5, 0.9;
  r *= config.squeeze;
  for (int layers : {1, 2}) {
    const auto circuit = build_circuit(4, layers, r);
    RVector theta(circuit.gate_count());
    RVector phi(circuit.gate_count());
    for (int k = 0; k < circuit.gate_count(); ++k) {
      theta(k) = rng.uniform(0.0, 2.0 * kPi);
      phi(k) = rng.uniform(0.0, 2.0 * kPi);
    }
    const auto sched = compile_schedule(circuit, theta, phi);
    const auto stat = joint_distribution(circuit, theta, phi, config.cutoff);
    const auto holo = joint_distribution(sched, config.cutoff);
    const double tvd = total_variation_distance(stat, holo);
    const std::string tag = std::to_string(layers) + "layer";
    checks.push_back({"holographic_tvd_" + tag, tvd <= 1e-6, tvd, 1e-6,
                      "cutoff " + std::to_string(config.cutoff)});
    const int peak = peak_slots(sched);
    checks.push_back({"peak_slots_" + tag, peak == layers + 1, static_cast<double>(peak),
                      static_cast<double>(layers + 1), ""});

    // Gaussian-side probabilities on patterns whose sector fits under the cutoff.
    const auto bundle = make_state_bundle(forward_covariance(circuit, theta, phi));
    double worst = 0.0;
    for (std::uint32_t bits = 0; bits < 16; ++bits) {
      std::vector<int> occ(4);
      for (int j = 0; j < 4; ++j) occ[j] = static_cast<int>(bits >> (3 - j) & 1u);
      const int total = std::popcount(bits);
      if (total >= config.cutoff) continue;
      std::vector<std::uint8_t> b(occ.begin(), occ.end());
      worst = std::max(worst, std::abs(pattern_probability(bundle, PhotonPattern(b)) -
                                       stat.probability(occ)));
    }
    checks.push_back({"gaussian_vs_fock_" + tag, worst <= 1e-6, worst, 1e-6,
                      "binary patterns with N < cutoff"});

    if (stat.deficit > 1e-6) {
      const auto binary = to_binary_distribution(stat, 4);
      warnings.push_back("truncation at cutoff " + std::to_string(config.cutoff) + " (" + tag +
                         "): norm deficit " + fmt(stat.deficit) + ", binary leakage " +
                         fmt(binary.leakage));
    }
  }

  bool ok = true;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& c : checks) {
    ok = ok && c.passed;
    log << (c.passed ? "PASS " : "FAIL ") << c.name << " residual=" << fmt(c.residual, 3)
        << " tolerance=" << fmt(c.tolerance, 3) << (c.note.empty() ? "" : " (" + c.note + ")")
        << "\n";
    rows.push_back({{"name", c.name},
                    {"passed", c.passed},
                    {"residual", c.residual},
                    {"tolerance", c.tolerance},
                    {"note", c.note}});
  }
  for (const auto& w : warnings) log << "WARNING " << w << "\n";
  const auto dir = prepare_out(config);
  write_json_file((dir / "validate.json").string(),
                  stamped({{"checks", rows}, {"warnings", warnings}, {"passed", ok}}, config));
  return ok ? kExitOk : kExitValidation;
}

}  // namespace hgbs
