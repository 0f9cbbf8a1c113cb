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

#include <algorithm>
#include <cmath>
#include <filesystem>

#include <gtest/gtest.h>

#include <aais/io.hpp>

using namespace aais;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("aais_io_test_" + name);
  fs::remove_all(dir);
  return dir;
}

MixtureModel sample_mixture(ComponentKind kind) {
  Matrix c(2, 2);
  c << 0.3, 0.1, 0.1, 0.2;
  return {kind, {MixtureComponent(0.25, Vector::Constant(2, -0.1), c),
                 MixtureComponent(0.75, Vector::Constant(2, 0.3), Matrix::Identity(2, 2) * 0.01)}};
}

}  // namespace

TEST(Io, MixtureJsonRoundTripIsExact) {
  for (const auto kind : {ComponentKind::gaussian(), ComponentKind::student_t(3.0)}) {
    const MixtureModel m = sample_mixture(kind);
    const MixtureModel back = mixture_from_json(mixture_to_json(m));
    EXPECT_EQ(back.kind(), m.kind());
    ASSERT_EQ(back.size(), m.size());
    for (std::size_t k = 0; k < m.size(); ++k) {
      EXPECT_EQ(back.component(k).weight(), m.component(k).weight());
      EXPECT_EQ(back.component(k).mean(), m.component(k).mean());
      EXPECT_EQ(back.component(k).cov(), m.component(k).cov());
    }
    EXPECT_EQ(mixture_to_json(back), mixture_to_json(m));
  }
}

TEST(Io, MixtureJsonLayout) {
  const std::string g = mixture_to_json(sample_mixture(ComponentKind::gaussian()));
  EXPECT_EQ(g.find("dof"), std::string::npos);
  EXPECT_NE(g.find("\"kind\": \"gaussian\""), std::string::npos);
  const std::string t = mixture_to_json(sample_mixture(ComponentKind::student_t(3.0)));
  EXPECT_NE(t.find("\"kind\": \"student-t\""), std::string::npos);
  EXPECT_NE(t.find("\"dof\": 3"), std::string::npos);
}

TEST(Io, MixtureJsonErrors) {
  EXPECT_THROW(mixture_from_json("{"), InvalidArgument);
  EXPECT_THROW(mixture_from_json(R"({"kind": "cauchy", "dim": 1, "components": []})"), InvalidArgument);
  EXPECT_THROW(
      mixture_from_json(R"({"kind": "gaussian", "dim": 2, "components": [{"weight": 1, "mean": [0], "cov": [1]}]})"),
      DimensionError);
}

TEST(Io, TraceLines) {
  AaisTrace trace;
  trace.iterations.push_back({1, 0, 0.7, 0.5, 0.4, 1});
  trace.iterations.push_back({1, 1, 0.7, 0.95, 0.9, 2});
  const std::string s = trace_to_jsonl(trace);
  EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), 2);
  EXPECT_EQ(s.substr(0, s.find('\n')), R"({"rung":1,"iter":0,"lambda":0.7,"ess":0.5,"ess_final":0.4,"components":1})");
}

TEST(Io, RecordLinesOmitWallTime) {
  RunRecord record;
  IterationRecord e;
  e.iteration = 0;
  e.loss = 1.5;
  e.e_r = 0.25;
  e.e_inf = 0.125;
  e.dataset_hash = 0xabcdef;
  e.wall_seconds = 42.0;
  record.entries.push_back(e);
  const std::string s = records_to_jsonl(record);
  EXPECT_EQ(s,
            R"({"iteration":0,"loss":1.5,"e_r":0.25,"e_inf":0.125,"dataset_hash":"0000000000abcdef","rad_fallback":false,"proposal":null})"
            "\n");
  EXPECT_NE(timings_to_jsonl(record).find("42"), std::string::npos);
}

TEST(Io, CsvFormatting) {
  Matrix t(2, 2);
  t << 0.1, -2.0, 1e-20, 3.0;
  EXPECT_EQ(csv_table({"a", "b"}, t), "a,b\n0.1,-2\n1e-20,3\n");
  EXPECT_THROW(csv_table({"a"}, t), DimensionError);
  PointSet p(3, 1);
  p << 1, 2, 3;
  EXPECT_EQ(points_csv(p), "x1,x2,x3\n1,2,3\n");
  EXPECT_EQ(std::stod(format_double(0.1 + 0.2)), 0.1 + 0.2);
}

TEST(Io, CheckpointRoundTrip) {
  const fs::path dir = scratch("ckpt");
  Rng rng(3);
  const MlpParams p = init_params({2, 5, 5, 1}, rng);
  write_checkpoint(dir / "net.json", p);
  EXPECT_TRUE(fs::exists(dir / "net.bin"));
  EXPECT_EQ(fs::file_size(dir / "net.bin"), static_cast<std::uintmax_t>(p.parameter_count()) * 8u);
  const MlpParams back = read_checkpoint(dir / "net.json");
  EXPECT_EQ(back.layer_sizes, p.layer_sizes);
  EXPECT_EQ(back.flatten(), p.flatten());
  fs::remove_all(dir);
}

TEST(Io, CheckpointErrors) {
  const fs::path dir = scratch("ckpt_bad");
  Rng rng(4);
  write_checkpoint(dir / "net.json", init_params({2, 3, 1}, rng));
  write_text(dir / "net.bin", "short");
  EXPECT_THROW(read_checkpoint(dir / "net.json"), DimensionError);
  write_text(dir / "other.json", R"({"layer_sizes": [2, 3, 1], "count": 13, "dtype": "f32", "data": "net.bin"})");
  EXPECT_THROW(read_checkpoint(dir / "other.json"), InvalidArgument);
  write_text(dir / "broken.json", "not json");
  EXPECT_THROW(read_checkpoint(dir / "broken.json"), InvalidArgument);
  EXPECT_THROW(read_checkpoint(dir / "missing.json"), Error);
  fs::remove_all(dir);
}

TEST(Io, WriteTextCreatesDirectories) {
  const fs::path dir = scratch("text");
  write_text(dir / "a" / "b" / "c.txt", "hello\n");
  EXPECT_EQ(read_text(dir / "a" / "b" / "c.txt"), "hello\n");
  fs::remove_all(dir);
}
