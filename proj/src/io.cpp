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

#include <aais/io.hpp>

#include <array>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace aais {

namespace {

using Json = nlohmann::ordered_json;

Json vector_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out.push_back(v(i));
  }
  return out;
}

Json mixture_json(const MixtureModel& model) {
  Json out;
  out["kind"] = model.kind().is_student_t() ? "student-t" : "gaussian";
  if (model.kind().is_student_t()) {
    out["dof"] = model.kind().dof;
  }
  out["dim"] = model.dim();
  Json components = Json::array();
  for (const auto& c : model.components()) {
    Json cov = Json::array();
    for (Eigen::Index i = 0; i < c.cov().rows(); ++i) {
      for (Eigen::Index j = 0; j < c.cov().cols(); ++j) {
        cov.push_back(c.cov()(i, j));
      }
    }
    components.push_back(Json{{"weight", c.weight()}, {"mean", vector_json(c.mean())}, {"cov", std::move(cov)}});
  }
  out["components"] = std::move(components);
  return out;
}

std::string hex64(std::uint64_t value) {
  std::array<char, 17> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value, 16);
  std::string digits(buf.data(), res.ptr);
  return std::string(16 - digits.size(), '0') + digits;
}

}  // namespace

std::string mixture_to_json(const MixtureModel& model) { return mixture_json(model).dump(2) + "\n"; }

MixtureModel mixture_from_json(const std::string& text) {
  try {
    const Json in = Json::parse(text);
    const std::string kind_name = in.at("kind").get<std::string>();
    ComponentKind kind;
    if (kind_name == "student-t") {
      kind = ComponentKind::student_t(in.at("dof").get<double>());
    } else if (kind_name != "gaussian") {
      throw InvalidArgument("mixture json: unknown kind '" + kind_name + "'");
    }
    const auto d = in.at("dim").get<Eigen::Index>();
    std::vector<MixtureComponent> components;
    for (const auto& c : in.at("components")) {
      const auto mean = c.at("mean").get<std::vector<double>>();
      const auto cov = c.at("cov").get<std::vector<double>>();
      if (static_cast<Eigen::Index>(mean.size()) != d || static_cast<Eigen::Index>(cov.size()) != d * d) {
        throw DimensionError("mixture json: component shape does not match dim");
      }
      Matrix sigma(d, d);
      for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
          sigma(i, j) = cov[static_cast<std::size_t>(i * d + j)];
        }
      }
      components.emplace_back(c.at("weight").get<double>(), Eigen::Map<const Vector>(mean.data(), d), sigma);
    }
    return MixtureModel(kind, std::move(components));
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("mixture json: ") + e.what());
  }
}

std::string trace_to_jsonl(const AaisTrace& trace) {
  std::string out;
  for (const auto& it : trace.iterations) {
    const Json line{{"rung", it.rung},           {"iter", it.iteration},           {"lambda", it.lambda},
                    {"ess", it.ess},             {"ess_final", it.ess_final},      {"components", it.components}};
    out += line.dump();
    out += '\n';
  }
  return out;
}

std::string records_to_jsonl(const RunRecord& record) {
  std::string out;
  for (const auto& e : record.entries) {
    Json line{{"iteration", e.iteration},
              {"loss", e.loss},
              {"e_r", e.e_r},
              {"e_inf", e.e_inf},
              {"dataset_hash", hex64(e.dataset_hash)},
              {"rad_fallback", e.rad_fallback}};
    line["proposal"] = e.proposal ? mixture_json(*e.proposal) : Json(nullptr);
    if (e.trace && !e.trace->iterations.empty()) {
      line["proposal_ess"] = e.trace->iterations[e.trace->best].ess_final;
    }
    out += line.dump();
    out += '\n';
  }
  return out;
}

std::string timings_to_jsonl(const RunRecord& record) {
  std::string out;
  for (const auto& e : record.entries) {
    out += Json{{"iteration", e.iteration}, {"wall_seconds", e.wall_seconds}}.dump();
    out += '\n';
  }
  return out;
}

std::string format_double(double value) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), res.ptr);
}

std::string csv_table(const std::vector<std::string>& header, const Matrix& table) {
  if (static_cast<Eigen::Index>(header.size()) != table.cols()) {
    throw DimensionError("csv_table: header and column count differ");
  }
  std::string out;
  for (std::size_t j = 0; j < header.size(); ++j) {
    out += j == 0 ? "" : ",";
    out += header[j];
  }
  out += '\n';
  for (Eigen::Index i = 0; i < table.rows(); ++i) {
    for (Eigen::Index j = 0; j < table.cols(); ++j) {
      if (j > 0) {
        out += ',';
      }
      out += format_double(table(i, j));
    }
    out += '\n';
  }
  return out;
}

std::string points_csv(const PointSet& points) {
  std::vector<std::string> header;
  for (Eigen::Index j = 0; j < points.rows(); ++j) {
    header.push_back("x" + std::to_string(j + 1));
  }
  return csv_table(header, points.transpose());
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) {
    throw Error("cannot write " + path.string());
  }
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error("cannot read " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_checkpoint(const std::filesystem::path& header_path, const MlpParams& params) {
  const Vector theta = params.flatten();
  std::filesystem::path data_path = header_path;
  data_path.replace_extension(".bin");

  std::string bytes(static_cast<std::size_t>(theta.size()) * sizeof(double), '\0');
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    auto word = std::bit_cast<std::uint64_t>(theta(i));
    if constexpr (std::endian::native == std::endian::big) {
      word = __builtin_bswap64(word);
    }
    std::memcpy(bytes.data() + i * static_cast<Eigen::Index>(sizeof(double)), &word, sizeof(word));
  }
  write_text(data_path, bytes);

  Json header;
  header["layer_sizes"] = params.layer_sizes;
  header["count"] = theta.size();
  header["dtype"] = "f64le";
  header["data"] = data_path.filename().string();
  write_text(header_path, header.dump(2) + "\n");
}

MlpParams read_checkpoint(const std::filesystem::path& header_path) {
  try {
    const Json header = Json::parse(read_text(header_path));
    if (header.at("dtype").get<std::string>() != "f64le") {
      throw InvalidArgument("checkpoint: unsupported dtype");
    }
    const auto sizes = header.at("layer_sizes").get<std::vector<Eigen::Index>>();
    const auto count = header.at("count").get<Eigen::Index>();
    const std::string bytes = read_text(header_path.parent_path() / header.at("data").get<std::string>());
    if (static_cast<Eigen::Index>(bytes.size()) != count * static_cast<Eigen::Index>(sizeof(double))) {
      throw DimensionError("checkpoint: data file size does not match count");
    }
    Vector theta(count);
    for (Eigen::Index i = 0; i < count; ++i) {
      std::uint64_t word = 0;
      std::memcpy(&word, bytes.data() + i * static_cast<Eigen::Index>(sizeof(double)), sizeof(word));
      if constexpr (std::endian::native == std::endian::big) {
        word = __builtin_bswap64(word);
      }
      theta(i) = std::bit_cast<double>(word);
    }
    return MlpParams::unflatten(sizes, theta);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("checkpoint header: ") + e.what());
  }
}

}  // namespace aais
