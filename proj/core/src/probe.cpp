// Copyright 2026 The Hyperwave Authors.
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
#include <map>
#include <numeric>
#include <random>
#include <string>

#include "hyperwave/error.hpp"
#include "hyperwave/eval.hpp"

namespace hyperwave {

void EvalConfig::validate() const {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    fail(ErrorCode::kConfigError, "train_fraction must lie in (0, 1)");
  }
  if (l2_penalty < 0.0) fail(ErrorCode::kConfigError, "l2_penalty must be >= 0");
  if (max_iterations == 0) fail(ErrorCode::kConfigError, "max_iterations must be > 0");
  if (seeds.empty()) fail(ErrorCode::kConfigError, "at least one seed is required");
}

Standardizer Standardizer::fit(const Eigen::MatrixXd& x) {
  Standardizer s;
  const double n = static_cast<double>(x.rows());
  s.mean = x.colwise().sum() / n;
  s.scale.resize(x.cols());
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const double var = (x.col(j).array() - s.mean(j)).square().sum() / n;
    s.scale(j) = var > 0.0 ? std::sqrt(var) : 1.0;
  }
  return s;
}

Eigen::MatrixXd Standardizer::transform(const Eigen::MatrixXd& x) const {
  return (x.rowwise() - mean).array().rowwise() / scale.array();
}

namespace {

// Row-wise softmax, in place.
void softmax_rows(Eigen::MatrixXd& logits) {
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    const double mx = logits.row(i).maxCoeff();
    logits.row(i) = (logits.row(i).array() - mx).exp();
    logits.row(i) /= logits.row(i).sum();
  }
}

// Parameters together with the logits X W + b they produce. The logits are
// linear in (W, b), so momentum steps update them without touching X.
struct Params {
  Eigen::MatrixXd w;
  Eigen::RowVectorXd b;
  Eigen::MatrixXd logits;
};

Params combine(double a, const Params& p, double c, const Params& q) {
  return {a * p.w + c * q.w, a * p.b + c * q.b, a * p.logits + c * q.logits};
}

class LogisticObjective {
 public:
  LogisticObjective(const Eigen::MatrixXd& x, const std::vector<std::size_t>& y,
                    double l2)
      : x_(x), y_(y), l2_(l2), inv_n_(1.0 / static_cast<double>(x.rows())) {}

  Params make(Eigen::MatrixXd w, Eigen::RowVectorXd b) const {
    Params p{std::move(w), std::move(b), {}};
    refresh(p);
    return p;
  }

  void refresh(Params& p) const { p.logits = (x_ * p.w).rowwise() + p.b; }

  double value(const Params& p) const {
    double loss = 0.0;
    for (Eigen::Index i = 0; i < p.logits.rows(); ++i) {
      const double mx = p.logits.row(i).maxCoeff();
      const double lse = mx + std::log((p.logits.row(i).array() - mx).exp().sum());
      loss += lse - p.logits(i, static_cast<Eigen::Index>(y_[static_cast<std::size_t>(i)]));
    }
    return loss * inv_n_ + 0.5 * l2_ * p.w.squaredNorm();
  }

  // Gradient in (w, b); its logits field holds X g_w + g_b.
  Params gradient(const Params& p) const {
    Eigen::MatrixXd probs = p.logits;
    softmax_rows(probs);
    for (Eigen::Index i = 0; i < probs.rows(); ++i) {
      probs(i, static_cast<Eigen::Index>(y_[static_cast<std::size_t>(i)])) -= 1.0;
    }
    Params g;
    g.w = (x_.transpose() * probs) * inv_n_ + l2_ * p.w;
    g.b = probs.colwise().sum() * inv_n_;
    refresh(g);
    return g;
  }

  // Upper bound on the gradient's Lipschitz constant:
  // lambda_max([X 1]^T [X 1]) / (2n) + l2, lambda_max from power iteration.
  double lipschitz() const {
    const Eigen::Index p = x_.cols();
    Eigen::VectorXd v = Eigen::VectorXd::Ones(p + 1);
    v.normalize();
    double lambda = 0.0;
    for (int it = 0; it < 100; ++it) {
      const Eigen::VectorXd xv = x_ * v.head(p) + Eigen::VectorXd::Constant(x_.rows(), v(p));
      Eigen::VectorXd next(p + 1);
      next.head(p) = x_.transpose() * xv;
      next(p) = xv.sum();
      const double norm = next.norm();
      if (norm == 0.0) break;
      const double prev = lambda;
      lambda = norm;
      v = next / norm;
      if (std::abs(lambda - prev) <= 1e-6 * lambda) break;
    }
    return 1.1 * lambda * 0.5 * inv_n_ + l2_ + 1e-12;
  }

 private:
  const Eigen::MatrixXd& x_;
  const std::vector<std::size_t>& y_;
  double l2_;
  double inv_n_;
};

double grad_norm(const Params& g) {
  return std::sqrt(g.w.squaredNorm() + g.b.squaredNorm());
}

}  // namespace

Eigen::MatrixXd LogisticModel::predict_proba(const Eigen::MatrixXd& x) const {
  Eigen::MatrixXd logits = (x * weights).rowwise() + bias;
  softmax_rows(logits);
  return logits;
}

LogisticModel fit_multinomial_logistic(const Eigen::MatrixXd& x,
                                       const std::vector<std::size_t>& y,
                                       std::size_t num_classes, double l2,
                                       std::size_t max_iterations, double tolerance) {
  if (static_cast<std::size_t>(x.rows()) != y.size()) {
    fail(ErrorCode::kDimensionMismatch, "feature rows and label count differ");
  }
  for (std::size_t c : y) {
    if (c >= num_classes) fail(ErrorCode::kUnknownLabel, "label code out of range");
  }
  const auto p = x.cols();
  const auto k = static_cast<Eigen::Index>(num_classes);
  LogisticObjective f(x, y, l2);
  double lip = f.lipschitz();

  Params cur = f.make(Eigen::MatrixXd::Zero(p, k), Eigen::RowVectorXd::Zero(k));
  Params prev = cur;
  Params look = cur;
  double f_cur = f.value(cur);
  double momentum = 1.0;

  LogisticModel model;
  model.objective_history.push_back(f_cur);
  for (std::size_t it = 0; it < max_iterations; ++it) {
    Params g = f.gradient(look);
    Params cand = combine(1.0, look, -1.0 / lip, g);
    double f_cand = f.value(cand);
    if (f_cand > f_cur) {
      // Restart from the current iterate with a plain gradient step.
      momentum = 1.0;
      g = f.gradient(cur);
      for (int backtrack = 0; backtrack < 60; ++backtrack) {
        cand = combine(1.0, cur, -1.0 / lip, g);
        f_cand = f.value(cand);
        if (f_cand <= f_cur) break;
        lip *= 2.0;
      }
      if (f_cand > f_cur) {
        cand = cur;
        f_cand = f_cur;
      }
    }
    prev = std::move(cur);
    cur = std::move(cand);
    const double f_prev = f_cur;
    f_cur = f_cand;
    model.objective_history.push_back(f_cur);
    model.iterations = it + 1;

    const double next_momentum = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
    const double beta = (momentum - 1.0) / next_momentum;
    momentum = next_momentum;
    look = combine(1.0 + beta, cur, -beta, prev);

    const double gn = grad_norm(g);
    if (gn <= tolerance ||
        (f_prev - f_cur) <= tolerance * std::max(1.0, std::abs(f_cur))) {
      model.converged = true;
      break;
    }
  }
  f.refresh(cur);
  model.gradient_norm = grad_norm(f.gradient(cur));
  if (model.gradient_norm <= tolerance) model.converged = true;
  model.weights = std::move(cur.w);
  model.bias = std::move(cur.b);
  return model;
}

double auroc(const std::vector<double>& scores, const std::vector<bool>& positive) {
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  // Average ranks over ties (Mann-Whitney U).
  std::vector<double> rank(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t t = i; t <= j; ++t) rank[order[t]] = avg;
    i = j + 1;
  }
  double pos = 0, rank_sum = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (positive[i]) {
      pos += 1;
      rank_sum += rank[i];
    }
  }
  const double neg = static_cast<double>(n) - pos;
  if (pos == 0 || neg == 0) return 0.5;
  return (rank_sum - pos * (pos + 1) / 2.0) / (pos * neg);
}

namespace {

struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

Split stratified_split(const std::vector<std::size_t>& y, std::size_t k,
                       double train_fraction, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::vector<std::size_t>> by_class(k);
  for (std::size_t i = 0; i < y.size(); ++i) by_class[y[i]].push_back(i);
  Split s;
  for (auto& members : by_class) {
    std::shuffle(members.begin(), members.end(), rng);
    const auto count = static_cast<double>(members.size());
    auto n_test = static_cast<std::size_t>(std::llround((1.0 - train_fraction) * count));
    n_test = std::clamp<std::size_t>(n_test, 1, members.size() - 1);
    s.test.insert(s.test.end(), members.begin(), members.begin() + static_cast<std::ptrdiff_t>(n_test));
    s.train.insert(s.train.end(), members.begin() + static_cast<std::ptrdiff_t>(n_test), members.end());
  }
  std::sort(s.train.begin(), s.train.end());
  std::sort(s.test.begin(), s.test.end());
  return s;
}

Split group_split(const std::vector<std::size_t>& groups, double train_fraction,
                  std::uint64_t seed) {
  std::map<std::size_t, std::vector<std::size_t>> members;
  for (std::size_t i = 0; i < groups.size(); ++i) members[groups[i]].push_back(i);
  if (members.size() < 2) {
    fail(ErrorCode::kInvalidArgument, "group holdout needs at least two groups");
  }
  std::vector<std::size_t> ids;
  for (const auto& [g, _] : members) ids.push_back(g);
  std::mt19937_64 rng(seed);
  std::shuffle(ids.begin(), ids.end(), rng);
  const double target = (1.0 - train_fraction) * static_cast<double>(groups.size());
  Split s;
  std::size_t taken = 0;
  for (std::size_t gi = 0; gi < ids.size(); ++gi) {
    const auto& rows = members[ids[gi]];
    const bool to_test = gi + 1 < ids.size() && (taken == 0 || static_cast<double>(taken) < target);
    auto& dst = to_test ? s.test : s.train;
    dst.insert(dst.end(), rows.begin(), rows.end());
    if (to_test) taken += rows.size();
  }
  std::sort(s.train.begin(), s.train.end());
  std::sort(s.test.begin(), s.test.end());
  return s;
}

Eigen::MatrixXd take_rows(const Eigen::MatrixXd& x, const std::vector<std::size_t>& idx) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(idx.size()), x.cols());
  for (std::size_t r = 0; r < idx.size(); ++r) {
    out.row(static_cast<Eigen::Index>(r)) = x.row(static_cast<Eigen::Index>(idx[r]));
  }
  return out;
}

MeanStd mean_std(const std::vector<double>& v) {
  MeanStd out;
  if (v.empty()) return out;
  out.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - out.mean) * (x - out.mean);
    out.std = std::sqrt(ss / static_cast<double>(v.size() - 1));
  }
  return out;
}

}  // namespace

ProbeSummary linear_probe(const Eigen::MatrixXd& features, const Categorical& labels,
                          const EvalConfig& cfg, const std::vector<std::size_t>* groups) {
  cfg.validate();
  const auto n = static_cast<std::size_t>(features.rows());
  if (labels.size() != n) {
    fail(ErrorCode::kDimensionMismatch, "label count does not match feature rows");
  }
  if (!features.allFinite()) fail(ErrorCode::kNonFinite, "probe features not finite");
  if (cfg.group_holdout && (groups == nullptr || groups->size() != n)) {
    fail(ErrorCode::kConfigError, "group holdout requires one group per row");
  }

  // Compact to the classes actually present.
  std::vector<std::size_t> count(labels.vocabulary.size(), 0);
  for (std::size_t c : labels.codes) {
    if (c >= count.size()) fail(ErrorCode::kUnknownLabel, "label code out of range");
    ++count[c];
  }
  std::vector<std::size_t> remap(count.size(), 0);
  std::vector<std::string> names;
  for (std::size_t c = 0; c < count.size(); ++c) {
    if (count[c] == 0) continue;
    if (count[c] < 2) {
      fail(ErrorCode::kClassTooSmall,
           "class '" + labels.vocabulary[c] + "' has a single member");
    }
    remap[c] = names.size();
    names.push_back(labels.vocabulary[c]);
  }
  const std::size_t k = names.size();
  if (k < 2) fail(ErrorCode::kSingleClass, "probe needs at least two classes");
  std::vector<std::size_t> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = remap[labels.codes[i]];

  ProbeSummary summary;
  std::vector<double> accs, f1s, aucs;
  for (std::uint64_t seed : cfg.seeds) {
    const Split split = cfg.group_holdout ? group_split(*groups, cfg.train_fraction, seed)
                                          : stratified_split(y, k, cfg.train_fraction, seed);
    Eigen::MatrixXd x_train = take_rows(features, split.train);
    Eigen::MatrixXd x_test = take_rows(features, split.test);
    if (cfg.standardize) {
      const Standardizer st = Standardizer::fit(x_train);
      x_train = st.transform(x_train);
      x_test = st.transform(x_test);
    }
    std::vector<std::size_t> y_train, y_test;
    for (std::size_t i : split.train) y_train.push_back(y[i]);
    for (std::size_t i : split.test) y_test.push_back(y[i]);

    const LogisticModel model = fit_multinomial_logistic(
        x_train, y_train, k, cfg.l2_penalty, cfg.max_iterations, cfg.tolerance);
    const Eigen::MatrixXd proba = model.predict_proba(x_test);

    ProbeMetrics run;
    run.split_seed = seed;
    run.converged = model.converged;
    run.gradient_norm = model.gradient_norm;
    run.iterations = model.iterations;
    std::vector<std::size_t> pred(y_test.size());
    std::size_t correct = 0;
    for (std::size_t i = 0; i < y_test.size(); ++i) {
      Eigen::Index arg = 0;
      proba.row(static_cast<Eigen::Index>(i)).maxCoeff(&arg);
      pred[i] = static_cast<std::size_t>(arg);
      if (pred[i] == y_test[i]) ++correct;
    }
    run.accuracy = y_test.empty() ? 0.0
                                  : static_cast<double>(correct) / static_cast<double>(y_test.size());
    double f1_sum = 0.0, auc_sum = 0.0;
    std::size_t f1_classes = 0, auc_classes = 0;
    for (std::size_t c = 0; c < k; ++c) {
      ClassMetrics cm;
      cm.label = names[c];
      std::size_t tp = 0, fp = 0, fn = 0;
      std::vector<double> scores(y_test.size());
      std::vector<bool> positive(y_test.size());
      for (std::size_t i = 0; i < y_test.size(); ++i) {
        const bool is = y_test[i] == c;
        const bool said = pred[i] == c;
        tp += is && said;
        fp += !is && said;
        fn += is && !said;
        scores[i] = proba(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c));
        positive[i] = is;
      }
      cm.support = tp + fn;
      cm.precision = tp + fp ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
      cm.recall = tp + fn ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
      cm.f1 = cm.precision + cm.recall > 0
                  ? 2 * cm.precision * cm.recall / (cm.precision + cm.recall)
                  : 0.0;
      const bool has_both = cm.support > 0 && cm.support < y_test.size();
      cm.auroc = has_both ? auroc(scores, positive) : 0.5;
      if (cm.support > 0) {
        f1_sum += cm.f1;
        ++f1_classes;
      }
      if (has_both) {
        auc_sum += cm.auroc;
        ++auc_classes;
      }
      run.per_class.push_back(std::move(cm));
    }
    run.macro_f1 = f1_classes ? f1_sum / static_cast<double>(f1_classes) : 0.0;
    run.auroc_ovr = auc_classes ? auc_sum / static_cast<double>(auc_classes) : 0.5;
    summary.non_convergence |= !run.converged;
    accs.push_back(run.accuracy);
    f1s.push_back(run.macro_f1);
    aucs.push_back(run.auroc_ovr);
    summary.runs.push_back(std::move(run));
  }
  summary.accuracy = mean_std(accs);
  summary.macro_f1 = mean_std(f1s);
  summary.auroc_ovr = mean_std(aucs);
  return summary;
}

}  // namespace hyperwave
