#pragma once

#include <string>

#include "json.hpp"

#include "hgbs/encoding.hpp"

namespace hgbs {

// Matrices travel as {"rows": r, "cols": c, "data": [[re, im], ...]} in
// row-major order. Loaders throw InputError with the offending field named.

nlohmann::json matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const nlohmann::json& doc, const std::string& what);

nlohmann::json kernel_to_json(const KernelMatrix& k);
KernelMatrix kernel_from_json(const nlohmann::json& doc);

nlohmann::json covariance_to_json(const GaussianState& s);
/// Also checks block structure and σ_Q positivity.
GaussianState covariance_from_json(const nlohmann::json& doc);

nlohmann::json takagi_to_json(const TakagiFactors& t);
TakagiFactors takagi_from_json(const nlohmann::json& doc);

nlohmann::json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const nlohmann::json& doc);

}  // namespace hgbs
