#pragma once

// Text file formats. Every file is a JSON object; complex numbers are always
// [re, im] pairs and matrices are row-major arrays of rows.
//
//   {"kind": "covariance", "modes": N, "ordering": "block", "data": [[...]]}
//   {"kind": "graph", "modes": N, "data": [[[re, im], ...], ...]}
//   {"kind": "realization", "modes": N, "channels": K, "graph": ..., "R": ...,
//    "Gamma": ..., "P": ..., "G": ..., "C": ..., "noise": [...]}
//
// "ordering" may be "interleaved" for (q1, p1, q2, p2, ...) covariance input;
// it is converted to the internal (q..., p...) ordering on load.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "gsynth/gaussian.hpp"
#include "gsynth/noise.hpp"
#include "gsynth/synthesis.hpp"

namespace gsynth::io {

using json = nlohmann::ordered_json;

enum class MatrixKind { Covariance, Graph };

struct MatrixFile {
  MatrixKind kind = MatrixKind::Covariance;
  std::size_t modes = 0;
  RealMatrix covariance;   // kind == Covariance
  ComplexMatrix graph;     // kind == Graph
};

/// Throws Error(Parse) with "line L:" prefixed messages.
MatrixFile parse_matrix_file(std::string_view text, double tol = kDefaultTol);

struct RealizationFile {
  Realization realization;
  std::vector<NoiseChannel> noise;
};

RealizationFile parse_realization_file(std::string_view text, double tol = kDefaultTol);

std::string read_text(const std::string& path);

json real_to_json(const RealMatrix& m);
json complex_to_json(const ComplexMatrix& m);
RealMatrix real_from_json(const json& j, const char* what);
ComplexMatrix complex_from_json(const json& j, const char* what);

json covariance_file(const RealMatrix& v);
json graph_file(const GraphMatrix& z);
json realization_file(const Realization& r, const std::vector<NoiseChannel>& noise = {});
json noise_to_json(const std::vector<NoiseChannel>& noise);

/// 64-bit FNV-1a of the bytes, as 16 hex digits.
std::string digest(std::string_view bytes);

}  // namespace gsynth::io
