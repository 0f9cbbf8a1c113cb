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

#include <aais/cli.hpp>

#include <algorithm>
#include <limits>
#include <optional>
#include <set>
#include <sstream>

#include <toml.hpp>

#include <aais/io.hpp>

namespace aais::cli {

namespace {

// Reads typed keys from one table and remembers which ones were consumed, so that leftovers
// can be reported as unknown.
class TableReader {
 public:
  TableReader(const toml::table& table, std::string section, std::string_view source)
      : table_(table), section_(std::move(section)), source_(source) {}

  [[noreturn]] void fail(const toml::source_region& where, std::string_view key, const std::string& message) const {
    std::ostringstream out;
    out << source_ << ':' << where.begin.line << ": " << qualified(key) << ": " << message;
    throw ConfigError(out.str());
  }

  [[noreturn]] void fail_missing(std::string_view key) const {
    std::ostringstream out;
    out << source_ << ':' << table_.source().begin.line << ": " << qualified(key) << ": required key is missing";
    throw ConfigError(out.str());
  }

  /// Error at the key's own line, or at the table's line if the key is absent.
  [[noreturn]] void fail_key(std::string_view key, const std::string& message) const {
    const toml::node* node = table_.get(key);
    fail(node != nullptr ? node->source() : table_.source(), key, message);
  }

  const toml::node* find(std::string_view key) {
    used_.emplace(key);
    return table_.get(key);
  }

  template <class T>
  bool read(std::string_view key, T& out) {
    const toml::node* node = find(key);
    if (node == nullptr) {
      return false;
    }
    out = convert<T>(*node, key);
    return true;
  }

  template <class T>
  void require(std::string_view key, T& out) {
    if (!read(key, out)) {
      fail_missing(key);
    }
  }

  template <class T>
  bool read_list(std::string_view key, std::vector<T>& out) {
    const toml::node* node = find(key);
    if (node == nullptr) {
      return false;
    }
    const toml::array* array = node->as_array();
    if (array == nullptr) {
      fail(node->source(), key, "expected an array");
    }
    out.clear();
    for (const auto& item : *array) {
      out.push_back(convert<T>(item, key));
    }
    return true;
  }

  const toml::table* subtable(std::string_view key) {
    const toml::node* node = find(key);
    if (node == nullptr) {
      return nullptr;
    }
    if (!node->is_table()) {
      fail(node->source(), key, "expected a table");
    }
    return node->as_table();
  }

  void finish() const {
    for (const auto& [key, node] : table_) {
      if (used_.count(std::string(key.str())) == 0) {
        fail(key.source(), key.str(), "unknown key");
      }
    }
  }

 private:
  [[nodiscard]] std::string qualified(std::string_view key) const {
    return section_.empty() ? std::string(key) : section_ + "." + std::string(key);
  }

  template <class T>
  T convert(const toml::node& node, std::string_view key) const {
    if constexpr (std::is_same_v<T, std::string>) {
      if (const auto v = node.value_exact<std::string>()) {
        return *v;
      }
      fail(node.source(), key, "expected a string");
    } else if constexpr (std::is_same_v<T, bool>) {
      if (const auto v = node.value_exact<bool>()) {
        return *v;
      }
      fail(node.source(), key, "expected a boolean");
    } else if constexpr (std::is_floating_point_v<T>) {
      if (node.is_number()) {
        return static_cast<T>(*node.value<double>());
      }
      fail(node.source(), key, "expected a number");
    } else {
      const auto v = node.value_exact<std::int64_t>();
      if (!v) {
        fail(node.source(), key, "expected an integer");
      }
      if constexpr (std::is_unsigned_v<T>) {
        if (*v < 0) {
          fail(node.source(), key, "expected a non-negative integer");
        }
        if (static_cast<std::uint64_t>(*v) > std::numeric_limits<T>::max()) {
          fail(node.source(), key, "integer out of range");
        }
      } else if (*v < std::numeric_limits<T>::min() || *v > std::numeric_limits<T>::max()) {
        fail(node.source(), key, "integer out of range");
      }
      return static_cast<T>(*v);
    }
  }

  const toml::table& table_;
  std::string section_;
  std::string_view source_;
  std::set<std::string, std::less<>> used_;
};

void read_train(TableReader& r, TrainConfig& t) {
  r.read("n_interior", t.n_interior);
  r.read("n_boundary", t.n_boundary);
  r.read("n_adaptive", t.n_adaptive);
  r.read("iterations", t.iterations);
  r.read("epochs_adam_pre", t.epochs_adam_pre);
  r.read("epochs_opt_pre", t.epochs_opt_pre);
  r.read("epochs_adam", t.epochs_adam);
  r.read("epochs_opt", t.epochs_opt);
  r.read("lr_adam", t.lr_adam);
  r.read("lr_opt", t.lr_opt);
  r.read("lbfgs_history", t.lbfgs_history);
  r.read("interior_weight", t.interior_weight);
  r.read("boundary_weight", t.boundary_weight);
  r.read("test_uniform", t.test_uniform);
  r.read("test_per_peak", t.test_per_peak);
  r.finish();
}

AaisConfig read_aais(TableReader* r, Eigen::Index n_search) {
  AaisConfig cfg = AaisConfig::with_search_size(n_search);
  if (r == nullptr) {
    return cfg;
  }
  r->read("n_proposal", cfg.n_proposal);
  r->read("n_refine", cfg.n_refine);
  r->read("accept_ess", cfg.accept_ess);
  r->read("merge_ess", cfg.merge_ess);
  r->read("delete_fraction", cfg.delete_fraction);
  r->read("blend", cfg.blend);
  r->read("refine_cycles", cfg.refine_cycles);
  r->read_list("lambdas", cfg.lambdas);
  r->read_list("ess_targets", cfg.ess_targets);
  r->read_list("rung_iterations", cfg.rung_iterations);
  double sigma0 = 0.0;
  if (r->read("sigma0", sigma0)) {
    cfg.sigma0 = Matrix::Identity(1, 1) * sigma0;  // resized to the problem dimension later
  }
  std::string family = "student-t";
  double dof = 3.0;
  r->read("family", family);
  r->read("dof", dof);
  if (family == "gaussian") {
    cfg.kind = ComponentKind::gaussian();
  } else if (family == "student-t") {
    if (!(dof > 2.0)) {
      r->fail_key("dof", "must exceed 2");
    }
    cfg.kind = ComponentKind::student_t(dof);
  } else {
    r->fail_key("family", "expected \"gaussian\" or \"student-t\"");
  }
  std::string rule = "moment-matched";
  r->read("merge_rule", rule);
  if (rule == "summed") {
    cfg.merge_rule = MergeRule::kSummed;
  } else if (rule != "moment-matched") {
    r->fail_key("merge_rule", "expected \"moment-matched\" or \"summed\"");
  }
  r->finish();
  return cfg;
}

}  // namespace

RunConfig parse_run_config(std::string_view text, std::string_view source) {
  toml::table root;
  try {
    root = toml::parse(text, source);
  } catch (const toml::parse_error& e) {
    std::ostringstream out;
    out << source << ':' << e.source().begin.line << ": " << e.description();
    throw ConfigError(out.str());
  }

  RunConfig cfg;
  TableReader top(root, "", source);
  top.require("experiment", cfg.experiment);
  top.require("problem", cfg.problem);
  std::string form = "product";
  top.read("form", form);
  if (form == "literal-sum") {
    cfg.form = PeakForm::kLiteralSum;
  } else if (form != "product") {
    top.fail_key("form", "expected \"product\" or \"literal-sum\"");
  }
  if (!top.read_list("seeds", cfg.seeds)) {
    top.fail_missing("seeds");
  }
  std::string out = cfg.out.string();
  top.read("out", out);
  cfg.out = out;

  const auto names = preset_names();
  if (std::find(names.begin(), names.end(), cfg.problem) == names.end()) {
    top.fail_key("problem", "unknown preset '" + cfg.problem + "'");
  }
  if (cfg.seeds.empty()) {
    top.fail_key("seeds", "needs at least one seed");
  }

  if (const toml::table* t = top.subtable("network")) {
    TableReader r(*t, "network", source);
    r.read("width", cfg.width);
    r.read("depth", cfg.depth);
    r.finish();
    if (cfg.width < 1 || cfg.depth < 1) {
      top.fail_key("network", "width and depth must be positive");
    }
  }
  if (const toml::table* t = top.subtable("train")) {
    TableReader r(*t, "train", source);
    read_train(r, cfg.train);
  }

  std::string kind = "uniform";
  Eigen::Index n_search = 10000;
  const toml::table* sampler = top.subtable("sampler");
  if (sampler != nullptr) {
    TableReader r(*sampler, "sampler", source);
    r.read("kind", kind);
    r.read("n_search", n_search);
    r.finish();
  }
  const toml::table* aais_table = top.subtable("aais");
  if (kind == "uniform") {
    cfg.train.sampler = UniformSampler{};
  } else if (kind == "rad") {
    cfg.train.sampler = RadSampler{n_search};
  } else if (kind == "aais") {
    std::optional<TableReader> r;
    if (aais_table != nullptr) {
      r.emplace(*aais_table, "aais", source);
    }
    AaisConfig aais = read_aais(r ? &*r : nullptr, n_search);
    const Eigen::Index d = make_preset(cfg.problem).dim();
    if (aais.sigma0) {
      aais.sigma0 = Matrix::Identity(d, d) * (*aais.sigma0)(0, 0);
    }
    cfg.train.sampler = AaisSampler{std::move(aais)};
  } else {
    top.fail_key("sampler", "expected \"uniform\", \"rad\" or \"aais\"");
  }
  if (aais_table != nullptr && kind != "aais") {
    top.fail_key("aais", "only allowed with sampler.kind = \"aais\"");
  }
  top.finish();

  try {
    cfg.train.validate();
    if (const auto* a = std::get_if<AaisSampler>(&cfg.train.sampler)) {
      a->config.validate();
    }
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string(source) + ": " + e.what());
  }
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  return parse_run_config(read_text(path), path.string());
}

}  // namespace aais::cli
