#include "samgsr/classifier.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>

#include "samgsr/errors.hpp"

namespace samgsr {

double LinearModel::margin(const double* x) const {
  double m = bias;
  for (std::size_t j = 0; j < weights.size(); ++j)
    m += weights[j] * (x[j] - mean[j]) / scale[j];
  return m;
}

double LinearModel::posterior(const double* x) const {
  if (majority) return majority_posterior;
  double f = platt_a * margin(x) + platt_b;
  if (f >= 0.0) {
    double e = std::exp(-f);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(f));
}

namespace {

// Logistic calibration of margins against smoothed targets (Platt scaling,
// fit by damped Newton with a halving line search).
void fit_platt(const std::vector<double>& margins,
               const std::vector<std::uint8_t>& labels, double& a, double& b) {
  std::size_t n = margins.size();
  double n_pos = 0, n_neg = 0;
  for (std::uint8_t y : labels) (y ? n_pos : n_neg) += 1;
  double hi = (n_pos + 1.0) / (n_pos + 2.0);
  double lo = 1.0 / (n_neg + 2.0);
  std::vector<double> target(n);
  for (std::size_t i = 0; i < n; ++i) target[i] = labels[i] ? hi : lo;

  double A = 0.0;
  double B = std::log((n_neg + 1.0) / (n_pos + 1.0));

  auto objective = [&](double pa, double pb) {
    double obj = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double f = pa * margins[i] + pb;
      // -t*log(p) - (1-t)*log(1-p) in the overflow-safe split form
      if (f >= 0.0)
        obj += target[i] * f + std::log1p(std::exp(-f));
      else
        obj += (target[i] - 1.0) * f + std::log1p(std::exp(f));
    }
    return obj;
  };

  double fval = objective(A, B);
  const double min_step = 1e-10;
  const double sigma = 1e-12;
  for (int iter = 0; iter < 100; ++iter) {
    double h11 = sigma, h22 = sigma, h21 = 0.0, g1 = 0.0, g2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double f = A * margins[i] + B;
      double p, q;
      if (f >= 0.0) {
        p = std::exp(-f) / (1.0 + std::exp(-f));
        q = 1.0 / (1.0 + std::exp(-f));
      } else {
        p = 1.0 / (1.0 + std::exp(f));
        q = std::exp(f) / (1.0 + std::exp(f));
      }
      double d2 = p * q;
      h11 += margins[i] * margins[i] * d2;
      h22 += d2;
      h21 += margins[i] * d2;
      double d1 = target[i] - p;
      g1 += margins[i] * d1;
      g2 += d1;
    }
    if (std::abs(g1) < 1e-10 && std::abs(g2) < 1e-10) break;

    double det = h11 * h22 - h21 * h21;
    double dA = -(h22 * g1 - h21 * g2) / det;
    double dB = -(-h21 * g1 + h11 * g2) / det;
    double gd = g1 * dA + g2 * dB;

    double step = 1.0;
    while (step >= min_step) {
      double new_f = objective(A + step * dA, B + step * dB);
      if (new_f < fval + 1e-4 * step * gd) {
        A += step * dA;
        B += step * dB;
        fval = new_f;
        break;
      }
      step /= 2.0;
    }
    if (step < min_step) break;
  }
  a = A;
  b = B;
}

}  // namespace

LinearModel train(const std::vector<std::vector<double>>& rows,
                  const std::vector<std::uint8_t>& labels,
                  const std::vector<std::string>& names,
                  const TrainOptions& options) {
  std::size_t n = rows.size();
  if (n != labels.size()) throw data_error("sample and label counts differ");
  std::size_t n_pos = 0;
  for (std::uint8_t y : labels) n_pos += y;
  std::size_t n_neg = n - n_pos;
  if (n_pos < 2 || n_neg < 2)
    throw data_error("training needs at least 2 samples per class");
  std::size_t width = names.size();
  for (const auto& row : rows)
    if (row.size() != width) throw data_error("ragged feature matrix");

  LinearModel model;
  std::vector<std::size_t> kept;
  for (std::size_t j = 0; j < width; ++j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += rows[i][j];
    double mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double r = rows[i][j] - mean;
      ss += r * r;
    }
    double sd = std::sqrt(ss / static_cast<double>(n - 1));
    if (sd > 0.0) {
      kept.push_back(j);
      model.features.push_back(names[j]);
      model.mean.push_back(mean);
      model.scale.push_back(sd);
    } else {
      model.dropped.push_back(names[j]);
    }
  }

  if (kept.empty()) {
    model.majority = true;
    model.majority_posterior =
        (static_cast<double>(n_pos) + 1.0) / (static_cast<double>(n) + 2.0);
    return model;
  }

  std::size_t f = kept.size();
  std::vector<double> x(n * (f + 1));  // standardized, bias column last
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < f; ++j)
      x[i * (f + 1) + j] = (rows[i][kept[j]] - model.mean[j]) / model.scale[j];
    x[i * (f + 1) + f] = 1.0;
  }
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = labels[i] ? 1.0 : -1.0;

  // Dual coordinate descent on the box-constrained hinge dual; fixed sweep
  // order keeps the fit deterministic.
  double c = options.c;
  std::vector<double> alpha(n, 0.0);
  std::vector<double> w(f + 1, 0.0);
  std::vector<double> qdiag(n);
  for (std::size_t i = 0; i < n; ++i) {
    double q = 0.0;
    for (std::size_t j = 0; j <= f; ++j) {
      double v = x[i * (f + 1) + j];
      q += v * v;
    }
    qdiag[i] = q;
  }

  for (std::size_t sweep = 0; sweep < options.max_sweeps; ++sweep) {
    for (std::size_t i = 0; i < n; ++i) {
      const double* xi = x.data() + i * (f + 1);
      double m = 0.0;
      for (std::size_t j = 0; j <= f; ++j) m += w[j] * xi[j];
      double grad = y[i] * m - 1.0;
      double pg = grad;
      if (alpha[i] <= 0.0) pg = std::min(grad, 0.0);
      else if (alpha[i] >= c) pg = std::max(grad, 0.0);
      if (pg == 0.0) continue;
      double next = std::clamp(alpha[i] - grad / qdiag[i], 0.0, c);
      double delta = (next - alpha[i]) * y[i];
      alpha[i] = next;
      for (std::size_t j = 0; j <= f; ++j) w[j] += delta * xi[j];
    }

    double wnorm2 = 0.0;
    for (std::size_t j = 0; j <= f; ++j) wnorm2 += w[j] * w[j];
    double hinge = 0.0, alpha_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double* xi = x.data() + i * (f + 1);
      double m = 0.0;
      for (std::size_t j = 0; j <= f; ++j) m += w[j] * xi[j];
      hinge += std::max(0.0, 1.0 - y[i] * m);
      alpha_sum += alpha[i];
    }
    double primal = 0.5 * wnorm2 + c * hinge;
    double dual = alpha_sum - 0.5 * wnorm2;
    if (primal - dual <= options.gap_tol * std::max(1.0, std::abs(primal))) break;
  }

  model.weights.assign(w.begin(), w.begin() + f);
  model.bias = w[f];

  std::vector<double> margins(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double* xi = x.data() + i * (f + 1);
    double m = 0.0;
    for (std::size_t j = 0; j <= f; ++j) m += w[j] * xi[j];
    margins[i] = m;
  }
  fit_platt(margins, labels, model.platt_a, model.platt_b);
  return model;
}

namespace {

// Feature matrix for one time point: signature genes at that time, raw
// values, absent cells imputed with the training mean of the feature.
std::vector<std::vector<double>> feature_rows(
    const LongitudinalMatrix& matrix, const std::vector<int>& gene_idx,
    std::size_t t, const std::vector<double>& impute) {
  std::size_t S = matrix.n_subjects();
  std::vector<std::vector<double>> rows(S, std::vector<double>(gene_idx.size()));
  for (std::size_t j = 0; j < gene_idx.size(); ++j)
    for (std::size_t s = 0; s < S; ++s)
      rows[s][j] = matrix.is_present(gene_idx[j], s, t)
                       ? matrix.value(gene_idx[j], s, t)
                       : impute[j];
  return rows;
}

}  // namespace

MetricsReport evaluate_signature(const Signature& signature,
                                 const LongitudinalMatrix& train_matrix,
                                 const std::vector<std::uint8_t>& train_classes,
                                 const LongitudinalMatrix& test_matrix,
                                 const std::vector<std::uint8_t>& test_classes,
                                 const EvaluateOptions& options) {
  std::size_t T = train_matrix.n_times();

  // Validate everything up front so the per-time loop cannot throw.
  std::vector<int> test_time(T);
  for (std::size_t t = 0; t < T; ++t) {
    test_time[t] = test_matrix.time_index(train_matrix.times[t].label);
    if (test_time[t] < 0)
      throw data_error("test matrix lacks time point " +
                       train_matrix.times[t].label);
  }
  for (const auto& e : signature.entries) {
    if (train_matrix.gene_index(e.gene) < 0)
      throw data_error("signature gene missing from training matrix: " + e.gene);
    if (test_matrix.gene_index(e.gene) < 0)
      throw data_error("signature gene missing from test matrix: " + e.gene);
  }
  {
    std::size_t pos = 0;
    for (std::uint8_t y : train_classes) pos += y;
    if (pos < 2 || train_classes.size() - pos < 2)
      throw data_error("training cohort needs at least 2 samples per class");
    std::size_t test_pos = 0;
    for (std::uint8_t y : test_classes) test_pos += y;
    if (test_classes.empty() || test_pos == 0)
      throw data_error("test cohort needs at least one case sample");
  }

  MetricsReport report;
  report.rows.resize(2 * T);

#pragma omp parallel for schedule(dynamic)
  for (long long tt = 0; tt < static_cast<long long>(T); ++tt) {
    std::size_t t = static_cast<std::size_t>(tt);
    MetricsRow train_row, test_row;
    train_row.cohort = "train";
    test_row.cohort = "test";
    train_row.time_label = test_row.time_label = train_matrix.times[t].label;
    train_row.time_index = test_row.time_index = static_cast<int>(t);

    auto genes = signature.genes_at_time(static_cast<int>(t));
    train_row.n_features = test_row.n_features = genes.size();
    if (genes.empty()) {
      train_row.empty = test_row.empty = true;
      report.rows[2 * t] = std::move(train_row);
      report.rows[2 * t + 1] = std::move(test_row);
      continue;
    }

    std::vector<int> train_idx(genes.size()), test_idx(genes.size());
    std::vector<double> impute(genes.size(), 0.0);
    for (std::size_t j = 0; j < genes.size(); ++j) {
      train_idx[j] = train_matrix.gene_index(genes[j]);
      test_idx[j] = test_matrix.gene_index(genes[j]);
      double sum = 0.0;
      std::size_t count = 0;
      for (std::size_t s = 0; s < train_matrix.n_subjects(); ++s)
        if (train_matrix.is_present(train_idx[j], s, t)) {
          sum += train_matrix.value(train_idx[j], s, t);
          ++count;
        }
      impute[j] = count ? sum / static_cast<double>(count) : 0.0;
    }

    auto train_rows = feature_rows(train_matrix, train_idx, t, impute);
    auto test_rows =
        feature_rows(test_matrix, test_idx, static_cast<std::size_t>(test_time[t]), impute);

    LinearModel model = train(train_rows, train_classes, genes, options.train);

    // Rebuild kept-feature rows when some columns were dropped.
    auto project = [&](const std::vector<std::vector<double>>& full) {
      std::vector<double> posts;
      posts.reserve(full.size());
      std::vector<double> kept_row(model.features.size());
      for (const auto& row : full) {
        std::size_t k = 0;
        for (std::size_t j = 0; j < genes.size() && k < model.features.size(); ++j)
          if (genes[j] == model.features[k]) kept_row[k++] = row[j];
        posts.push_back(model.posterior(kept_row.data()));
      }
      return posts;
    };
    auto train_posts = project(train_rows);
    auto test_posts = project(test_rows);

    train_row.error = metric_error(train_posts, train_classes);
    train_row.gbs = metric_gbs(train_posts, train_classes);
    train_row.bcm = metric_bcm(train_posts, train_classes);
    train_row.aupr = metric_aupr(train_posts, train_classes);
    test_row.error = metric_error(test_posts, test_classes);
    test_row.gbs = metric_gbs(test_posts, test_classes);
    test_row.bcm = metric_bcm(test_posts, test_classes);
    test_row.aupr = metric_aupr(test_posts, test_classes);

    if (!model.dropped.empty()) {
#pragma omp critical
      report.warnings.push_back("time " + train_matrix.times[t].label + ": " +
                                std::to_string(model.dropped.size()) +
                                " zero-variance feature(s) dropped");
    }
    report.rows[2 * t] = std::move(train_row);
    report.rows[2 * t + 1] = std::move(test_row);
  }
  std::sort(report.warnings.begin(), report.warnings.end());
  return report;
}

}  // namespace samgsr
