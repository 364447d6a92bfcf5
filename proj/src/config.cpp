#include "hgbs/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "hgbs/common.hpp"
#include "hgbs/rng.hpp"

namespace hgbs {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  T v{};
  const std::string s = trim(text);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw InputError("config key '" + key + "': cannot parse '" + text + "'");
  return v;
}

void require(bool ok, const std::string& key, const std::string& range) {
  if (!ok) throw InputError("config key '" + key + "' out of range (" + range + ")");
}

std::string fmt(double x) {
  std::ostringstream s;
  s << std::setprecision(17) << x;
  return s.str();
}

}  // namespace

RandomGraphSpec parse_random_spec(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) parts.push_back(trim(item));
  if (parts.size() != 3) throw InputError("--random expects M,p,seed");
  RandomGraphSpec spec;
  spec.node_count = parse_number<int>("random", parts[0]);
  spec.edge_probability = parse_number<double>("random", parts[1]);
  spec.seed = parse_number<std::uint64_t>("random", parts[2]);
  require(spec.node_count >= 1 && spec.node_count <= 64, "random", "1 <= M <= 64");
  require(spec.edge_probability >= 0.0 && spec.edge_probability <= 1.0, "random", "0 <= p <= 1");
  return spec;
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{
      "budget", "covariance", "cutoff",  "graph",     "graphs",    "layers",
      "max_iterations", "nmax", "out",   "p",         "random",    "restarts",
      "seed",   "shots",      "sizes",   "squeeze",   "t",         "tolerance"};
  return keys;
}

void RunConfig::set(const std::string& key, const std::string& raw) {
  const std::string value = trim(raw);
  if (key == "graph") {
    graph = value;
  } else if (key == "random") {
    random = value.empty() ? std::nullopt : std::optional(parse_random_spec(value));
  } else if (key == "covariance") {
    covariance = value;
  } else if (key == "t") {
    t = parse_number<double>(key, value);
    require(t > 0.0 && t < 1.0, key, "0 < t < 1");
  } else if (key == "layers") {
    layers = parse_number<int>(key, value);
    require(layers == 1 || layers == 2, key, "1 or 2");
  } else if (key == "nmax") {
    nmax = parse_number<int>(key, value);
    require(nmax >= 0 && nmax <= 32 && nmax % 2 == 0, key, "even, 0..32");
  } else if (key == "shots") {
    shots = parse_number<std::uint64_t>(key, value);
    require(shots <= 100000000, key, "<= 1e8");
  } else if (key == "seed") {
    seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "out") {
    require(!value.empty(), key, "non-empty path");
    out = value;
  } else if (key == "cutoff") {
    cutoff = parse_number<int>(key, value);
    require(cutoff >= 2 && cutoff <= 10, key, "2..10");
  } else if (key == "squeeze") {
    squeeze = parse_number<double>(key, value);
    require(squeeze >= 0.0 && squeeze <= 1.5, key, "0..1.5");
  } else if (key == "restarts") {
    restarts = parse_number<int>(key, value);
    require(restarts >= 0 && restarts <= 1000, key, "0..1000");
  } else if (key == "max_iterations") {
    max_iterations = parse_number<int>(key, value);
    require(max_iterations >= 1, key, ">= 1");
  } else if (key == "tolerance") {
    tolerance = parse_number<double>(key, value);
    require(tolerance > 0.0 && tolerance < 1.0, key, "0 < tol < 1");
  } else if (key == "budget") {
    budget = parse_number<double>(key, value);
    require(budget > 0.0, key, "> 0");
  } else if (key == "sizes") {
    sizes.clear();
    std::stringstream ss(value);
    for (std::string item; std::getline(ss, item, ',');) {
      const int m = parse_number<int>(key, item);
      require(m >= 2 && m <= 64, key, "2..64 each");
      sizes.push_back(m);
    }
    require(!sizes.empty(), key, "at least one size");
  } else if (key == "graphs") {
    graphs = parse_number<int>(key, value);
    require(graphs >= 1 && graphs <= 1000, key, "1..1000");
  } else if (key == "p") {
    p = parse_number<double>(key, value);
    require(p > 0.0 && p <= 1.0, key, "0 < p <= 1");
  } else {
    throw InputError("unknown config key '" + key + "'");
  }
}

void RunConfig::load(std::istream& in, const std::string& source_name) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash_pos = line.find('#');
    if (hash_pos != std::string::npos) line.erase(hash_pos);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw InputError(source_name + ":" + std::to_string(lineno) + ": expected key = value");
    set(trim(line.substr(0, eq)), line.substr(eq + 1));
  }
}

void RunConfig::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config " + path);
  load(in, path);
}

std::string RunConfig::canonical() const {
  std::map<std::string, std::string> kv;
  kv["graph"] = graph;
  kv["random"] = random ? std::to_string(random->node_count) + "," +
                              fmt(random->edge_probability) + "," + std::to_string(random->seed)
                        : "";
  kv["covariance"] = covariance;
  kv["t"] = fmt(t);
  kv["layers"] = std::to_string(layers);
  kv["nmax"] = std::to_string(nmax);
  kv["shots"] = std::to_string(shots);
  kv["seed"] = std::to_string(seed);
  kv["cutoff"] = std::to_string(cutoff);
  kv["squeeze"] = fmt(squeeze);
  kv["restarts"] = std::to_string(restarts);
  kv["max_iterations"] = std::to_string(max_iterations);
  kv["tolerance"] = fmt(tolerance);
  kv["budget"] = fmt(budget);
  std::string s;
  for (std::size_t i = 0; i < sizes.size(); ++i) s += (i ? "," : "") + std::to_string(sizes[i]);
  kv["sizes"] = s;
  kv["graphs"] = std::to_string(graphs);
  kv["p"] = fmt(p);
  std::string out_text;
  for (const auto& [k, v] : kv) out_text += k + "=" + v + "\n";
  return out_text;
}

std::string RunConfig::hash() const {
  std::ostringstream s;
  s << std::hex << std::setw(16) << std::setfill('0') << fnv1a64(canonical());
  return s.str();
}

}  // namespace hgbs
