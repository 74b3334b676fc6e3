// Copyright 2026 The SubStrat Authors
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

#include "substrat/toy_automl.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

#include "substrat/error.hpp"

namespace substrat::toy {

namespace {

using nlohmann::json;

SymbolId argmax(std::span<const std::uint64_t> counts, SymbolId fallback) {
  SymbolId best = fallback;
  std::uint64_t best_count = 0;
  for (SymbolId c = 0; c < counts.size(); ++c) {
    if (counts[c] > best_count) {
      best = c;
      best_count = counts[c];
    }
  }
  return best;
}

std::uint64_t cells(std::size_t rows, const Candidate& candidate, std::size_t features) {
  const std::size_t width = candidate.family == "majority" ? 1 : features + 1;
  return static_cast<std::uint64_t>(rows) * width;
}

std::vector<Index> feature_columns(const Dataset& dataset) {
  std::vector<Index> out;
  for (Index j = 0; j < dataset.n_cols(); ++j) {
    if (j != dataset.target_col()) out.push_back(j);
  }
  return out;
}

std::string describe(const Candidate& candidate, const Model& model, const Dataset& dataset,
                     std::span<const Index> features, double cv_accuracy) {
  json blob;
  blob["family"] = candidate.family;
  if (candidate.family == "naive_bayes") blob["smoothing"] = candidate.smoothing;
  json names = json::array();
  for (Index j : features) names.push_back(dataset.column_name(j));
  blob["features"] = std::move(names);
  if (auto rule = model.rule_column()) blob["rule_feature"] = dataset.column_name(*rule);
  blob["cv_accuracy"] = cv_accuracy;
  return blob.dump();
}

}  // namespace

const std::vector<Candidate>& model_zoo() {
  static const std::vector<Candidate> zoo = {
      {"majority", 0.0},
      {"one_rule", 0.0},
      {"naive_bayes", 0.1},
      {"naive_bayes", 1.0},
  };
  return zoo;
}

Split stratified_split(const Dataset& dataset, double holdout_fraction, Rng& rng) {
  const auto& target = dataset.column(dataset.target_col());
  std::vector<std::vector<Index>> by_class(target.cardinality());
  for (Index i = 0; i < dataset.n_rows(); ++i) by_class[target[i]].push_back(i);

  Split split;
  for (auto& rows : by_class) {
    std::shuffle(rows.begin(), rows.end(), rng);
    auto take = static_cast<std::size_t>(std::lround(holdout_fraction * static_cast<double>(rows.size())));
    if (take >= rows.size() && !rows.empty()) take = rows.size() - 1;
    split.holdout.insert(split.holdout.end(), rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(take));
    split.train.insert(split.train.end(), rows.begin() + static_cast<std::ptrdiff_t>(take), rows.end());
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.holdout.begin(), split.holdout.end());
  if (split.holdout.empty()) split.holdout = split.train;
  return split;
}

// --- models ---------------------------------------------------------------

Model Model::fit(const Candidate& candidate, const Dataset& dataset, std::span<const Index> rows,
                 std::span<const Index> features) {
  Model model;
  model.candidate_ = candidate;
  model.features_.assign(features.begin(), features.end());

  const auto& target = dataset.column(dataset.target_col());
  const std::size_t k = target.cardinality();
  std::vector<std::uint64_t> class_counts(k, 0);
  for (Index i : rows) ++class_counts[target[i]];
  model.majority_ = argmax(class_counts, 0);

  if (candidate.family == "majority") return model;

  if (candidate.family == "one_rule") {
    std::uint64_t best_correct = 0;
    for (Index j : features) {
      const auto& col = dataset.column(j);
      std::vector<std::uint64_t> table(col.cardinality() * k, 0);
      for (Index i : rows) ++table[col[i] * k + target[i]];
      std::vector<SymbolId> rule(col.cardinality(), model.majority_);
      std::uint64_t correct = 0;
      for (std::size_t v = 0; v < col.cardinality(); ++v) {
        std::span<const std::uint64_t> counts(table.data() + v * k, k);
        rule[v] = argmax(counts, model.majority_);
        correct += counts[rule[v]];
      }
      if (!model.rule_column_ || correct > best_correct) {
        model.rule_column_ = j;
        model.rule_ = std::move(rule);
        best_correct = correct;
      }
    }
    return model;
  }

  if (candidate.family != "naive_bayes" || !(candidate.smoothing > 0.0)) {
    throw Error(ErrorCode::InvalidParams, "unknown model candidate '" + candidate.family + "'");
  }
  const double lambda = candidate.smoothing;
  const double n = static_cast<double>(rows.size());
  model.log_prior_.resize(k);
  for (std::size_t c = 0; c < k; ++c) {
    model.log_prior_[c] = std::log((static_cast<double>(class_counts[c]) + lambda) / (n + lambda * static_cast<double>(k)));
  }
  model.log_lik_.reserve(features.size());
  for (Index j : features) {
    const auto& col = dataset.column(j);
    const std::size_t v_count = col.cardinality();
    std::vector<std::uint64_t> table(v_count * k, 0);
    for (Index i : rows) ++table[col[i] * k + target[i]];
    std::vector<double> lik(v_count * k);
    for (std::size_t v = 0; v < v_count; ++v) {
      for (std::size_t c = 0; c < k; ++c) {
        lik[v * k + c] = std::log((static_cast<double>(table[v * k + c]) + lambda) /
                                  (static_cast<double>(class_counts[c]) + lambda * static_cast<double>(v_count)));
      }
    }
    model.log_lik_.push_back(std::move(lik));
  }
  return model;
}

SymbolId Model::predict(const Dataset& dataset, Index row) const {
  if (candidate_.family == "majority") return majority_;
  if (candidate_.family == "one_rule") {
    if (!rule_column_) return majority_;
    return rule_[dataset.column(*rule_column_)[row]];
  }
  const std::size_t k = log_prior_.size();
  SymbolId best = 0;
  double best_score = -std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < k; ++c) {
    double score = log_prior_[c];
    for (std::size_t f = 0; f < features_.size(); ++f) {
      score += log_lik_[f][dataset.column(features_[f])[row] * k + c];
    }
    if (score > best_score) {
      best_score = score;
      best = static_cast<SymbolId>(c);
    }
  }
  return best;
}

double Model::accuracy(const Dataset& dataset, std::span<const Index> rows) const {
  if (rows.empty()) return 0.0;
  const auto& target = dataset.column(dataset.target_col());
  std::size_t correct = 0;
  for (Index i : rows) correct += predict(dataset, i) == target[i] ? 1 : 0;
  return static_cast<double>(correct) / static_cast<double>(rows.size());
}

// --- search ---------------------------------------------------------------

ModelConfig fit(const Dataset& dataset, const FitOptions& options) {
  Stopwatch clock;
  if (!(options.time_budget_s > 0.0)) throw Error(ErrorCode::InvalidParams, "time budget must be positive");
  if (options.eval_budget && *options.eval_budget == 0) {
    throw Error(ErrorCode::InvalidParams, "evaluation budget must be positive");
  }

  std::vector<Candidate> zoo;
  for (const auto& c : model_zoo()) {
    if (!options.restrict_family || c.family == *options.restrict_family) zoo.push_back(c);
  }
  if (zoo.empty()) throw Error(ErrorCode::InvalidParams, "unknown model family '" + *options.restrict_family + "'");

  Rng rng(options.seed);
  const Split split = stratified_split(dataset, kHoldoutFraction, rng);
  const std::vector<Index> features = feature_columns(dataset);
  const std::size_t folds = std::min(kFolds, split.train.size());

  std::vector<double> score_sum(zoo.size(), 0.0);
  std::vector<std::size_t> score_count(zoo.size(), 0);
  std::uint64_t evaluations = 0;
  std::uint64_t work = 0;

  auto exhausted = [&] {
    if (options.eval_budget && evaluations >= *options.eval_budget) return true;
    return evaluations > 0 && clock.elapsed().count() >= options.time_budget_s;
  };

  std::vector<Index> order = split.train;
  std::vector<Index> fold_train;
  std::vector<Index> fold_valid;
  while (!exhausted()) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t f = 0; f < std::max<std::size_t>(folds, 1) && !exhausted(); ++f) {
      fold_train.clear();
      fold_valid.clear();
      if (folds < 2) {
        fold_train = order;
        fold_valid = order;
      } else {
        for (std::size_t p = 0; p < order.size(); ++p) (p % folds == f ? fold_valid : fold_train).push_back(order[p]);
      }
      std::sort(fold_train.begin(), fold_train.end());
      std::sort(fold_valid.begin(), fold_valid.end());
      for (std::size_t c = 0; c < zoo.size() && !exhausted(); ++c) {
        const Model model = Model::fit(zoo[c], dataset, fold_train, features);
        score_sum[c] += model.accuracy(dataset, fold_valid);
        ++score_count[c];
        ++evaluations;
        work += cells(fold_train.size() + fold_valid.size(), zoo[c], features.size());
      }
    }
  }

  std::size_t best = 0;
  double best_mean = -1.0;
  for (std::size_t c = 0; c < zoo.size(); ++c) {
    if (score_count[c] == 0) continue;
    const double mean = score_sum[c] / static_cast<double>(score_count[c]);
    if (mean > best_mean) {
      best = c;
      best_mean = mean;
    }
  }

  const Model model = Model::fit(zoo[best], dataset, split.train, features);
  ModelConfig out;
  out.model_family = zoo[best].family;
  out.accuracy = model.accuracy(dataset, split.holdout);
  out.config_blob = describe(zoo[best], model, dataset, features, best_mean);
  out.evaluations = evaluations;
  out.work_units = work + cells(split.train.size() + split.holdout.size(), zoo[best], features.size());
  out.wall_time = clock.elapsed();
  return out;
}

ModelConfig score(const Dataset& dataset, const std::string& config_blob, std::uint64_t seed) {
  Stopwatch clock;
  json blob;
  try {
    blob = json::parse(config_blob);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidParams, std::string("config blob is not JSON: ") + e.what());
  }

  Candidate candidate;
  std::vector<Index> features;
  try {
    candidate.family = blob.at("family").get<std::string>();
    candidate.smoothing = blob.value("smoothing", 0.0);
    std::vector<std::string> names = blob.value("features", std::vector<std::string>{});
    if (blob.contains("rule_feature")) names = {blob.at("rule_feature").get<std::string>()};
    for (const auto& name : names) {
      auto j = dataset.find_column(name);
      if (!j || *j == dataset.target_col()) throw Error(ErrorCode::InvalidParams, "feature '" + name + "' not in data");
      features.push_back(*j);
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidParams, std::string("malformed config blob: ") + e.what());
  }
  const auto& zoo = model_zoo();
  if (std::none_of(zoo.begin(), zoo.end(), [&](const Candidate& c) { return c.family == candidate.family; })) {
    throw Error(ErrorCode::InvalidParams, "unknown model family '" + candidate.family + "'");
  }

  Rng rng(seed);
  const Split split = stratified_split(dataset, kHoldoutFraction, rng);
  const Model model = Model::fit(candidate, dataset, split.train, features);
  ModelConfig out;
  out.model_family = candidate.family;
  out.config_blob = config_blob;
  out.accuracy = model.accuracy(dataset, split.holdout);
  out.evaluations = 0;
  out.work_units = cells(split.train.size() + split.holdout.size(), candidate, features.size());
  out.wall_time = clock.elapsed();
  return out;
}

ModelConfig ToyAdapter::fit(const FitRequest& request) {
  const Dataset dataset = load_csv(request.data_path, request.target);
  return toy::fit(dataset, {request.time_budget_s, request.eval_budget, request.restrict_family, request.seed});
}

ModelConfig ToyAdapter::score(const ScoreRequest& request) {
  const Dataset dataset = load_csv(request.data_path, request.target);
  return toy::score(dataset, request.config_blob, request.seed);
}

}  // namespace substrat::toy
