#include "hgbs/serialize.hpp"

#include <fstream>

namespace hgbs {

namespace {

const nlohmann::json& field(const nlohmann::json& doc, const char* key, const std::string& what) {
  if (!doc.is_object() || !doc.contains(key))
    throw InputError(what + ": missing field '" + key + "'");
  return doc.at(key);
}

std::vector<double> real_list(const nlohmann::json& doc, const char* key, const std::string& what) {
  const auto& v = field(doc, key, what);
  if (!v.is_array()) throw InputError(what + ": '" + key + "' must be an array");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) throw InputError(what + ": '" + key + "' must hold numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

RVector to_vector(const std::vector<double>& v) {
  return Eigen::Map<const RVector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

nlohmann::json matrix_to_json(const CMatrix& m) {
  nlohmann::json data = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) data.push_back({m(i, j).real(), m(i, j).imag()});
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

CMatrix matrix_from_json(const nlohmann::json& doc, const std::string& what) {
  const auto& rows = field(doc, "rows", what);
  const auto& cols = field(doc, "cols", what);
  const auto& data = field(doc, "data", what);
  if (!rows.is_number_integer() || !cols.is_number_integer() || rows.get<long>() < 0 ||
      cols.get<long>() < 0)
    throw InputError(what + ": rows/cols must be non-negative integers");
  const long r = rows.get<long>();
  const long c = cols.get<long>();
  if (!data.is_array() || static_cast<long>(data.size()) != r * c)
    throw InputError(what + ": data must hold rows*cols entries");
  CMatrix m(r, c);
  for (long k = 0; k < r * c; ++k) {
    const auto& e = data[k];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
      throw InputError(what + ": entry " + std::to_string(k) + " is not [re, im]");
    const cplx z(e[0].get<double>(), e[1].get<double>());
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw InputError(what + ": non-finite entry " + std::to_string(k));
    m(k / c, k % c) = z;
  }
  return m;
}

nlohmann::json kernel_to_json(const KernelMatrix& k) {
  return {{"kind", "kernel"}, {"matrix", matrix_to_json(k.entries)}};
}

KernelMatrix kernel_from_json(const nlohmann::json& doc) {
  KernelMatrix k{matrix_from_json(field(doc, "matrix", "kernel"), "kernel")};
  if (k.entries.rows() != k.entries.cols() || k.entries.rows() % 2 != 0)
    throw InputError("kernel: matrix must be square with even size");
  return k;
}

nlohmann::json covariance_to_json(const GaussianState& s) {
  return {{"kind", "covariance"}, {"mode_count", s.mode_count()}, {"sigma", matrix_to_json(s.sigma)}};
}

GaussianState covariance_from_json(const nlohmann::json& doc) {
  CMatrix sigma = matrix_from_json(field(doc, "sigma", "covariance"), "covariance");
  if (sigma.rows() != sigma.cols() || sigma.rows() % 2 != 0 || sigma.rows() == 0)
    throw InputError("covariance: sigma must be square with positive even size");
  GaussianState s = GaussianState::from_sigma(std::move(sigma));
  s.validate();
  return s;
}

nlohmann::json takagi_to_json(const TakagiFactors& t) {
  auto vec = [](const RVector& v) { return std::vector<double>(v.data(), v.data() + v.size()); };
  return {{"kind", "takagi"},
          {"c", t.c},
          {"singular_values", vec(t.singular_values)},
          {"squeeze_params", vec(t.squeeze_params)},
          {"signed_squeeze_params", vec(t.signed_squeeze_params)},
          {"unitary", matrix_to_json(t.unitary)}};
}

TakagiFactors takagi_from_json(const nlohmann::json& doc) {
  TakagiFactors t;
  const auto& c = field(doc, "c", "takagi");
  if (!c.is_number()) throw InputError("takagi: 'c' must be a number");
  t.c = c.get<double>();
  t.singular_values = to_vector(real_list(doc, "singular_values", "takagi"));
  t.squeeze_params = to_vector(real_list(doc, "squeeze_params", "takagi"));
  t.signed_squeeze_params = doc.contains("signed_squeeze_params")
                                ? to_vector(real_list(doc, "signed_squeeze_params", "takagi"))
                                : t.squeeze_params;
  t.unitary = matrix_from_json(field(doc, "unitary", "takagi"), "takagi");
  const auto m = t.unitary.rows();
  if (t.unitary.cols() != m || t.singular_values.size() != m || t.squeeze_params.size() != m ||
      t.signed_squeeze_params.size() != m)
    throw InputError("takagi: inconsistent sizes");
  if (unitarity_residual(t.unitary) > 1e-8) throw InputError("takagi: unitary is not unitary");
  return t;
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(path + ": malformed JSON (" + e.what() + ")");
  }
}

void write_json_file(const std::string& path, const nlohmann::json& doc) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out << doc.dump() << "\n";
}

}  // namespace hgbs
