#include "samgsr/metrics.hpp"

#include <algorithm>
#include <numeric>

#include "samgsr/errors.hpp"

namespace samgsr {

namespace {

void check_inputs(const std::vector<double>& posteriors,
                  const std::vector<std::uint8_t>& truths) {
  if (posteriors.size() != truths.size())
    throw data_error("posterior and truth lengths differ");
  if (posteriors.empty()) throw data_error("no samples to score");
  for (double p : posteriors)
    if (!(p >= 0.0 && p <= 1.0))
      throw data_error("posterior outside [0, 1]");
}

}  // namespace

double metric_error(const std::vector<double>& posteriors,
                    const std::vector<std::uint8_t>& truths) {
  check_inputs(posteriors, truths);
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < posteriors.size(); ++i) {
    std::uint8_t predicted = posteriors[i] >= 0.5 ? 1 : 0;
    if (predicted != truths[i]) ++wrong;
  }
  return static_cast<double>(wrong) / static_cast<double>(posteriors.size());
}

double metric_gbs(const std::vector<double>& posteriors,
                  const std::vector<std::uint8_t>& truths) {
  check_inputs(posteriors, truths);
  double total = 0.0;
  for (std::size_t i = 0; i < posteriors.size(); ++i) {
    double r = posteriors[i] - static_cast<double>(truths[i]);
    total += r * r;
  }
  return total / static_cast<double>(posteriors.size());
}

double metric_bcm(const std::vector<double>& posteriors,
                  const std::vector<std::uint8_t>& truths) {
  check_inputs(posteriors, truths);
  double total = 0.0;
  for (std::size_t i = 0; i < posteriors.size(); ++i)
    total += truths[i] ? posteriors[i] : 1.0 - posteriors[i];
  return total / static_cast<double>(posteriors.size());
}

double metric_aupr(const std::vector<double>& posteriors,
                   const std::vector<std::uint8_t>& truths) {
  check_inputs(posteriors, truths);
  std::size_t n = posteriors.size();
  std::size_t positives = 0;
  for (std::uint8_t t : truths) positives += t;
  if (positives == 0) throw data_error("AUPR undefined without a positive sample");

  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return posteriors[a] > posteriors[b];
  });

  double area = 0.0;
  double prev_recall = 0.0;
  std::size_t tp = 0, fp = 0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && posteriors[idx[j]] == posteriors[idx[i]]) {
      if (truths[idx[j]]) ++tp;
      else ++fp;
      ++j;
    }
    double recall = static_cast<double>(tp) / static_cast<double>(positives);
    double precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    area += (recall - prev_recall) * precision;
    prev_recall = recall;
    i = j;
  }
  return area;
}

}  // namespace samgsr
