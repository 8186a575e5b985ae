#pragma once

#include <cmath>
#include <vector>

#include "smurf/error.hpp"
#include "smurf/harness/correlation.hpp"

namespace smurf::harness {

/// Caption scores of one image, one entry per captioner, aligned with the
/// captioners' system-level human score (e.g. M2).
struct ImageCaptionSet {
  std::vector<double> reference_metric;
  std::vector<double> tested_metric;
};

struct FailureReport {
  std::size_t evaluated = 0;  // images where both correlations are defined
  std::size_t failures = 0;
  double rate = 0.0;  // P(F)
  std::vector<double> disparities;
};

/// An image is a critical failure when the Pearson correlation of the
/// reference metric with the system-level human scores exceeds that of the
/// tested metric by more than `threshold`. Images where either correlation
/// is undefined (constant scores) are skipped.
inline FailureReport critical_failure_rate(const std::vector<double>& system_human,
                                           const std::vector<ImageCaptionSet>& images, double threshold = 1.0) {
  FailureReport rep;
  for (const auto& img : images) {
    if (img.reference_metric.size() != system_human.size() || img.tested_metric.size() != system_human.size())
      throw Error(ErrorCode::MalformedInput, "caption set size differs from captioner count");
    double ref, tested;
    try {
      ref = pearson_coefficient(img.reference_metric, system_human);
      tested = pearson_coefficient(img.tested_metric, system_human);
    } catch (const Error&) {
      continue;
    }
    const double disparity = ref - tested;
    rep.disparities.push_back(disparity);
    ++rep.evaluated;
    if (disparity > threshold) ++rep.failures;
  }
  rep.rate = rep.evaluated ? static_cast<double>(rep.failures) / static_cast<double>(rep.evaluated) : 0.0;
  return rep;
}

}  // namespace smurf::harness
