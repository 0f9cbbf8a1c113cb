// Copyright 2026 The aais-pinn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef AAIS_IO_HPP
#define AAIS_IO_HPP

#include <filesystem>
#include <string>
#include <vector>

#include <aais/aais.hpp>
#include <aais/mixture.hpp>
#include <aais/pinn.hpp>
#include <aais/train.hpp>

/**
 * \file
 * \brief Serialization of mixtures, traces, run records, checkpoints and CSV tables.
 *
 * Mixture JSON:
 * \code
 * {"kind": "student-t", "dof": 3, "dim": 2,
 *  "components": [{"weight": 1, "mean": [0, 0], "cov": [1, 0, 0, 1]}]}
 * \endcode
 * `cov` is row-major; `dof` is omitted for Gaussian mixtures.
 *
 * A checkpoint is a JSON header `{"layer_sizes": [...], "count": n, "dtype": "f64le",
 * "data": "<file>.bin"}` next to a raw little-endian float64 parameter vector.
 */

namespace aais {

std::string mixture_to_json(const MixtureModel& model);
MixtureModel mixture_from_json(const std::string& text);

/// One JSON object per iterate: rung, iter, lambda, ess, ess_final, components.
std::string trace_to_jsonl(const AaisTrace& trace);

/// One JSON object per entry. Wall time is left out so reruns are byte-identical.
std::string records_to_jsonl(const RunRecord& record);

/// {"iteration": i, "wall_seconds": t} per entry.
std::string timings_to_jsonl(const RunRecord& record);

/// Shortest round-trip decimal form.
std::string format_double(double value);

/// Comma-separated table with a header row and LF line endings, one CSV row per matrix row.
std::string csv_table(const std::vector<std::string>& header, const Matrix& table);

/// Header x1..xd, one row per point.
std::string points_csv(const PointSet& points);

/// Writes `header_path` (.json) and its sibling .bin file.
void write_checkpoint(const std::filesystem::path& header_path, const MlpParams& params);
MlpParams read_checkpoint(const std::filesystem::path& header_path);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

}  // namespace aais

#endif
