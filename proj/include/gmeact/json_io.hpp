#pragma once

// JSON encodings shared by the CLI and the external-solver adapter.
//
//   matrix: {"dims": [2,2,...], "re": [row-major reals], "im": [...]}
//   ket:    {"dims": [...], "amps_re": [...], "amps_im": [...]}

#include <filesystem>
#include <string>

#include <json.hpp>

#include "gmeact/linalg.hpp"

namespace gmeact {

using json = nlohmann::json;

json matrix_to_json(const Matrix& m, const Dims& dims);
/// Throws std::invalid_argument on malformed input.
Matrix matrix_from_json(const json& j, Dims* dims_out = nullptr);

json ket_to_json(const Ket& ket);
Ket ket_from_json(const json& j);

json density_to_json(const DensityMatrix& rho);
DensityMatrix density_from_json(const json& j);

json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const json& j);

}  // namespace gmeact
