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

#include <aais/aais.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace aais {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double ess_or_zero(const WeightedBatch& batch) { return batch.degenerate ? 0.0 : ess(batch); }

/// Sample/EM cycles shared by the initial proposal and the candidate refinement. The loop runs
/// for cycle = 0..C_u inclusive and stops after the EM step of the first pass whose ESS
/// (measured before that step) reaches T_a.
RefineResult refine(const TargetDensity& target, MixtureModel model, const AaisConfig& cfg, Rng& rng) {
  RefineResult result{std::move(model), 0, 0.0, false};
  for (int cycle = 0; cycle <= cfg.refine_cycles; ++cycle) {
    const WeightedBatch batch = sample_weighted(target, result.model, cfg.n_refine, rng);
    result.last_ess = ess_or_zero(batch);
    result.degenerate = result.degenerate || batch.degenerate;
    result.model = em_step(result.model, batch);
    ++result.cycles;
    if (result.last_ess >= cfg.accept_ess) {
      break;
    }
  }
  return result;
}

Eigen::Index argmax(const Vector& values) {
  Eigen::Index best = 0;
  values.maxCoeff(&best);
  return best;
}

MixtureComponent merge_components(const MixtureComponent& existing, const MixtureComponent& candidate,
                                  MergeRule rule) {
  if (rule == MergeRule::kSummed) {
    return {existing.weight(), existing.mean() + candidate.mean(), existing.cov() + candidate.cov()};
  }
  const Vector offset = existing.mean() - candidate.mean();
  const Vector mean = 0.5 * (existing.mean() + candidate.mean());
  const Matrix cov = 0.5 * (existing.cov() + candidate.cov()) + 0.25 * offset * offset.transpose();
  return {existing.weight(), mean, cov};
}

/// Uniform search points with their target values, drawn once per run.
struct SearchSet {
  PointSet points;
  Vector log_target;
};

SearchSet draw_search_set(const TargetDensity& target, const AaisConfig& cfg, Rng& rng) {
  SearchSet search{target.domain().sample_uniform(cfg.n_search, rng), {}};
  search.log_target = target.log_evaluate(search.points);
  return search;
}

RefineResult initial_from_search(const TargetDensity& target, const SearchSet& search, const AaisConfig& cfg,
                                 Rng& rng) {
  const Eigen::Index best = argmax(search.log_target);
  if (!std::isfinite(search.log_target(best))) {
    throw DegenerateBatchError("flat target on search set");
  }
  auto seed = MixtureModel::single(cfg.kind, search.points.col(best), cfg.initial_covariance(target.dim()));
  return refine(target, std::move(seed), cfg, rng);
}

double log_sum_exp(const Vector& v) {
  const double top = v.maxCoeff();
  if (!std::isfinite(top)) {
    return top;
  }
  return top + std::log((v.array() - top).exp().sum());
}

/// ESS(Q; q) = (int Q)^2 / int Q^2 / q, both integrals estimated by importance sampling from
/// psi. With psi = q this is the usual (sum w)^2 / (N sum w^2).
double pooled_ess(const Vector& log_target, const Vector& log_q, const Vector& log_psi) {
  const auto n = static_cast<double>(log_target.size());
  const Vector a = log_target - log_psi;
  const Vector b = 2.0 * log_target - log_q - log_psi;
  const double lse_a = log_sum_exp(a);
  if (!std::isfinite(lse_a)) {
    return 0.0;
  }
  return std::min(1.0, std::exp(2.0 * lse_a - log_sum_exp(b) - std::log(n)));
}

/// The current iterate measured against the rung target and against the final target.
struct IterateEvaluation {
  WeightedBatch rung_batch;  ///< weights against psi; its largest weight seeds the next candidate
  double rung_ess = 0.0;
  double final_ess = 0.0;
};

/// Target values of the search set under one rung.
struct RungSearch {
  const SearchSet* search = nullptr;
  Vector log_rung;
};

Vector rung_log_values(const TargetDensity& target, const AnnealedTarget& rung_target, const PointSet& points,
                       const Vector& log_target) {
  if (rung_target.lambda() == 1.0) {
    return log_target;
  }
  Vector log_rung = rung_target.combine(rung_target.proposal().log_density(points), log_target);
  for (Eigen::Index i = 0; i < points.cols(); ++i) {
    if (!target.domain().contains(points.col(i))) {
      log_rung(i) = kNegInf;
    }
  }
  return log_rung;
}

Vector floored(Vector v) { return v.cwiseMax(kLogProposalFloor); }

IterateEvaluation evaluate_iterate(const TargetDensity& target, const AnnealedTarget& rung_target,
                                   const MixtureModel& proposal, const AaisConfig& cfg, const RungSearch* pool,
                                   Rng& rng) {
  const Eigen::Index n_draws = cfg.n_proposal;
  PointSet draws = proposal.sample(n_draws, rng);
  const Vector log_target_draws = target.log_evaluate(draws);
  const Vector log_rung_draws = rung_log_values(target, rung_target, draws, log_target_draws);
  const Vector log_q_draws = floored(proposal.log_density(draws));

  if (pool == nullptr) {
    IterateEvaluation eval{make_weighted_batch(std::move(draws), log_rung_draws, log_q_draws), 0.0, 0.0};
    eval.rung_ess = pooled_ess(log_rung_draws, log_q_draws, log_q_draws);
    eval.final_ess = pooled_ess(log_target_draws, log_q_draws, log_q_draws);
    return eval;
  }

  const SearchSet& search = *pool->search;
  const Eigen::Index n_search = search.points.cols();
  const Eigen::Index n = n_draws + n_search;
  PointSet points(target.dim(), n);
  points << draws, search.points;
  Vector log_target(n);
  log_target << log_target_draws, search.log_target;
  Vector log_rung(n);
  log_rung << log_rung_draws, pool->log_rung;
  Vector log_q(n);
  log_q << log_q_draws, floored(proposal.log_density(search.points));

  const double log_total = std::log(static_cast<double>(n));
  const double log_draw_share = std::log(static_cast<double>(n_draws));
  const double log_uniform = std::log(static_cast<double>(n_search)) - std::log(target.domain().volume());
  Vector log_psi(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double x = log_draw_share + log_q(i);
    const double hi = std::max(x, log_uniform);
    log_psi(i) = hi + std::log(std::exp(x - hi) + std::exp(log_uniform - hi)) - log_total;
  }

  IterateEvaluation eval{make_weighted_batch(std::move(points), log_rung, log_psi), 0.0, 0.0};
  eval.rung_ess = pooled_ess(log_rung, log_q, log_psi);
  eval.final_ess = pooled_ess(log_target, log_q, log_psi);
  return eval;
}

}  // namespace

AaisConfig AaisConfig::with_search_size(Eigen::Index n_search) {
  AaisConfig cfg;
  cfg.n_search = n_search;
  cfg.n_proposal = std::max<Eigen::Index>(1, n_search / 10);
  cfg.n_refine = std::max<Eigen::Index>(1, cfg.n_proposal / 10);
  return cfg;
}

void AaisConfig::validate() const {
  const auto fail = [](const char* what) { throw InvalidArgument(std::string("AaisConfig: ") + what); };
  if (n_search < 1 || n_proposal < 1 || n_refine < 1) {
    fail("search sizes must be positive");
  }
  if (refine_cycles < 0) {
    fail("refine_cycles must be non-negative");
  }
  const auto in_unit = [](double t) { return t > 0.0 && t < 1.0; };
  if (!in_unit(accept_ess) || !in_unit(merge_ess) || !in_unit(blend) || !in_unit(delete_fraction)) {
    fail("thresholds and the blend weight must lie in (0, 1)");
  }
  if (lambdas.empty() || lambdas.size() != ess_targets.size() || lambdas.size() != rung_iterations.size()) {
    fail("ladders must be non-empty and of equal length");
  }
  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    if (lambdas[k] < 0.0 || lambdas[k] > 1.0 || (k > 0 && lambdas[k] < lambdas[k - 1])) {
      fail("lambda ladder must be non-decreasing within [0, 1]");
    }
    if (!in_unit(ess_targets[k]) && ess_targets[k] != 1.0) {
      fail("ESS ladder entries must lie in (0, 1]");
    }
    if (rung_iterations[k] < 0) {
      fail("iteration ladder entries must be non-negative");
    }
  }
  if (lambdas.back() != 1.0) {
    fail("lambda ladder must end at 1");
  }
  if (sigma0 && (sigma0->rows() != sigma0->cols())) {
    fail("sigma0 must be square");
  }
}

Matrix AaisConfig::initial_covariance(Eigen::Index dim) const {
  if (sigma0) {
    require_dim(dim, sigma0->rows(), "AaisConfig::sigma0");
    return *sigma0;
  }
  return default_sigma0(dim, n_refine);
}

Matrix default_sigma0(Eigen::Index dim, Eigen::Index n_refine) {
  if (dim < 1 || n_refine < 1) {
    throw InvalidArgument("default_sigma0: dimension and n must be positive");
  }
  const auto n = static_cast<double>(n_refine);
  const double entry = dim < 2 ? 100.0 / (n * n) : 0.1;
  return Matrix::Identity(dim, dim) * entry;
}

RefineResult initial_proposal(const TargetDensity& target, const AaisConfig& cfg, Rng& rng) {
  const SearchSet search = draw_search_set(target, cfg, rng);
  return initial_from_search(target, search, cfg, rng);
}

RefineResult spawn_candidate(const TargetDensity& target, const WeightedBatch& search, const AaisConfig& cfg,
                             Rng& rng) {
  Vector start;
  if (search.degenerate || search.size() == 0) {
    start = target.domain().sample_uniform(1, rng).col(0);
  } else {
    start = search.points.col(argmax(search.log_raw));
  }
  auto candidate = MixtureModel::single(cfg.kind, std::move(start), cfg.initial_covariance(target.dim()));
  RefineResult result = refine(target, std::move(candidate), cfg, rng);
  result.degenerate = result.degenerate || search.degenerate;
  return result;
}

RefineResult spawn_candidate(const TargetDensity& target, const MixtureModel& proposal, const AaisConfig& cfg,
                             Rng& rng) {
  const WeightedBatch search = sample_weighted(target, proposal, cfg.n_proposal, rng);
  return spawn_candidate(target, search, cfg, rng);
}

UpdateResult update_proposal(const MixtureModel& proposal, const MixtureModel& candidate, const AaisConfig& cfg,
                             Rng& rng) {
  require_dim(proposal.dim(), candidate.dim(), "update_proposal");
  if (candidate.size() != 1 || !(candidate.kind() == proposal.kind())) {
    throw InvalidArgument("update_proposal: candidate must be one component of the same family");
  }
  const MixtureComponent& star = candidate.component(0);
  const PointSet points = candidate.sample(cfg.n_refine, rng);
  const Vector log_star = candidate.log_density(points);

  UpdateResult result{proposal, false, 0, Vector::Zero(static_cast<Eigen::Index>(proposal.size()))};
  for (std::size_t m = 0; m < proposal.size(); ++m) {
    const auto& c = proposal.component(m);
    const Vector log_component = component_log_pdf_from_mahalanobis(proposal.kind(), c, c.mahalanobis_sq(points));
    const Vector log_ratio = log_component - log_star;
    const double value = std::isfinite(log_ratio.maxCoeff()) ? ess_from_log(log_ratio) : 0.0;
    result.scores(static_cast<Eigen::Index>(m)) = c.weight() * value;
  }

  const Eigen::Index best = argmax(result.scores);
  if (result.scores(best) > cfg.merge_ess) {
    std::vector<MixtureComponent> components = proposal.components();
    components[static_cast<std::size_t>(best)] =
        merge_components(components[static_cast<std::size_t>(best)], star, cfg.merge_rule);
    result.model = MixtureModel(proposal.kind(), std::move(components));
    result.merged = true;
    result.merged_into = static_cast<std::size_t>(best);
    return result;
  }

  std::vector<MixtureComponent> components = proposal.components();
  for (auto& c : components) {
    c.set_weight(cfg.blend * c.weight());
  }
  components.emplace_back(1.0 - cfg.blend, star.mean(), star.cov());
  result.model = MixtureModel(proposal.kind(), std::move(components));
  return result;
}

MixtureModel delete_components(const MixtureModel& model, std::size_t current_count, double delete_fraction) {
  if (current_count == 0) {
    throw InvalidArgument("delete_components: component count must be positive");
  }
  const double threshold = delete_fraction / static_cast<double>(current_count);
  std::vector<MixtureComponent> survivors;
  for (const auto& c : model.components()) {
    if (!(c.weight() < threshold)) {
      survivors.push_back(c);
    }
  }
  if (survivors.empty()) {
    const auto largest = std::max_element(model.components().begin(), model.components().end(),
                                          [](const auto& a, const auto& b) { return a.weight() < b.weight(); });
    survivors.push_back(*largest);
    survivors.front().set_weight(1.0);
    return {model.kind(), std::move(survivors)};
  }
  if (survivors.size() == model.size()) {
    return model;
  }
  double total = 0.0;
  for (const auto& c : survivors) {
    total += c.weight();
  }
  for (auto& c : survivors) {
    c.set_weight(c.weight() / total);
  }
  return {model.kind(), std::move(survivors)};
}

AaisResult run_aais(const TargetDensity& target, const AaisConfig& cfg, Rng& rng) {
  cfg.validate();
  AaisTrace trace;
  const SearchSet search = draw_search_set(target, cfg, rng);
  RefineResult init = initial_from_search(target, search, cfg, rng);
  trace.initial_cycles = init.cycles;
  MixtureModel proposal = std::move(init.model);
  MixtureModel best = proposal;
  double best_ess = kNegInf;

  const auto record = [&](int rung, int iteration, double lambda, const IterateEvaluation& eval) {
    trace.iterations.push_back({rung, iteration, lambda, eval.rung_ess, eval.final_ess, proposal.size()});
    if (eval.final_ess > best_ess) {
      best_ess = eval.final_ess;
      best = proposal;
      trace.best = trace.iterations.size() - 1;
    }
  };

  for (std::size_t k = 0; k < cfg.lambdas.size(); ++k) {
    const int rung = static_cast<int>(k) + 1;
    const double lambda = cfg.lambdas[k];
    // Q_k is frozen against the proposal at rung entry.
    const AnnealedTarget rung_target(proposal, target, lambda);
    RungSearch pool;
    if (cfg.reuse_search_points) {
      pool = {&search, rung_log_values(target, rung_target, search.points, search.log_target)};
    }
    const RungSearch* pool_ptr = cfg.reuse_search_points ? &pool : nullptr;
    IterateEvaluation eval = evaluate_iterate(target, rung_target, proposal, cfg, pool_ptr, rng);
    record(rung, 0, lambda, eval);

    for (int j = 0; j < cfg.rung_iterations[k]; ++j) {
      if (eval.rung_ess >= cfg.ess_targets[k]) {
        break;
      }
      RefineResult candidate = spawn_candidate(rung_target, eval.rung_batch, cfg, rng);
      trace.degenerate_candidate = trace.degenerate_candidate || eval.rung_batch.degenerate;
      proposal = update_proposal(proposal, candidate.model, cfg, rng).model;
      for (int step = 0; step < 2; ++step) {
        proposal = em_step(proposal, sample_weighted(rung_target, proposal, cfg.n_proposal, rng));
      }
      proposal = delete_components(proposal, proposal.size(), cfg.delete_fraction);
      eval = evaluate_iterate(target, rung_target, proposal, cfg, pool_ptr, rng);
      record(rung, j + 1, lambda, eval);
    }
  }
  return {std::move(best), std::move(trace)};
}

}  // namespace aais
