#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace hgbs {

/// `--random M,p,seed`.
struct RandomGraphSpec {
  int node_count = 0;
  double edge_probability = 0.0;
  std::uint64_t seed = 0;
};

RandomGraphSpec parse_random_spec(const std::string& text);

/// Everything a run depends on. Files use one `key = value` per line with
/// `#` comments; keys match the long flag names. Unknown keys and
/// out-of-range values are InputErrors.
struct RunConfig {
  std::string graph;                  // graph JSON path
  std::optional<RandomGraphSpec> random;
  std::string covariance;             // covariance JSON (validate)
  double t = 0.5;                     // safety factor, (0, 1)
  int layers = 1;                     // 1 or 2
  int nmax = 8;                       // even, 0..32
  std::uint64_t shots = 100000;
  std::uint64_t seed = 1;
  std::string out = "out";
  int cutoff = 8;                     // 2..10
  double squeeze = 0.4;               // r used by validate
  int restarts = 8;
  int max_iterations = 2000;
  double tolerance = 1e-10;
  double budget = 2e9;                // enumeration work budget
  std::vector<int> sizes{12, 16, 20, 24};  // table1
  int graphs = 5;                     // table1 graphs per size
  double p = 0.5;                     // table1 edge probability

  /// Sets one field from its textual form.
  void set(const std::string& key, const std::string& value);
  void load_file(const std::string& path);
  void load(std::istream& in, const std::string& source_name);

  /// Canonical `key=value` lines (sorted, output directory excluded).
  std::string canonical() const;
  /// FNV-1a of canonical(), as 16 hex digits.
  std::string hash() const;
};

/// Keys accepted by RunConfig::set.
const std::vector<std::string>& config_keys();

}  // namespace hgbs
