#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "smurf/error.hpp"

namespace smurf::harness {

enum class CorrelationMethod { Pearson, Spearman, Kendall };

inline std::string_view to_string(CorrelationMethod m) {
  switch (m) {
    case CorrelationMethod::Pearson: return "pearson";
    case CorrelationMethod::Spearman: return "spearman";
    case CorrelationMethod::Kendall: return "kendall";
  }
  return "unknown";
}

inline CorrelationMethod parse_method(std::string_view name) {
  if (name == "pearson") return CorrelationMethod::Pearson;
  if (name == "spearman") return CorrelationMethod::Spearman;
  if (name == "kendall") return CorrelationMethod::Kendall;
  throw Error(ErrorCode::Configuration, "unknown correlation method " + std::string(name));
}

struct Correlation {
  CorrelationMethod method = CorrelationMethod::Pearson;
  double coefficient = 0.0;
  double p_value = 1.0;  // two-sided
  std::size_t n = 0;
};

struct CorrelationReport {
  Correlation pearson;
  Correlation spearman;
  Correlation kendall;
  std::size_t n = 0;
};

using ScorePair = std::pair<double, double>;  // (metric, human)

namespace detail {

inline void require_size(std::size_t n) {
  if (n < 3) throw Error(ErrorCode::InsufficientData, "correlation needs at least 3 pairs");
}

inline double t_test_p(double r, std::size_t n) {
  if (n <= 2) return 1.0;
  const double df = static_cast<double>(n - 2);
  if (std::abs(r) >= 1.0) return 0.0;
  const double t = r * std::sqrt(df / (1.0 - r * r));
  boost::math::students_t dist(df);
  return 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
}

}  // namespace detail

/// Average (fractional) ranks, 1-based.
inline std::vector<double> fractional_ranks(const std::vector<double>& v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

inline double pearson_coefficient(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 0.0 || syy <= 0.0) throw Error(ErrorCode::DegenerateInput, "constant series");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

inline Correlation pearson(const std::vector<double>& x, const std::vector<double>& y) {
  detail::require_size(x.size());
  Correlation c{CorrelationMethod::Pearson, pearson_coefficient(x, y), 1.0, x.size()};
  c.p_value = detail::t_test_p(c.coefficient, c.n);
  return c;
}

/// Pearson on average ranks; p-value from the t approximation.
inline Correlation spearman(const std::vector<double>& x, const std::vector<double>& y) {
  detail::require_size(x.size());
  Correlation c{CorrelationMethod::Spearman, pearson_coefficient(fractional_ranks(x), fractional_ranks(y)), 1.0,
                x.size()};
  c.p_value = detail::t_test_p(c.coefficient, c.n);
  return c;
}

/// Kendall tau-b: (C - D) / sqrt((n0 - n1)(n0 - n2)), ties excluded per
/// variable. The p-value uses the tie-corrected normal approximation.
inline Correlation kendall(const std::vector<double>& x, const std::vector<double>& y) {
  detail::require_size(x.size());
  const std::size_t n = x.size();
  double concordant = 0.0, discordant = 0.0, tied_x = 0.0, tied_y = 0.0;
  for (std::size_t i = 1; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) {
      const double dx = x[i] - x[j];
      const double dy = y[i] - y[j];
      if (dx == 0.0 && dy == 0.0) {
        tied_x += 1.0;
        tied_y += 1.0;
      } else if (dx == 0.0) {
        tied_x += 1.0;
      } else if (dy == 0.0) {
        tied_y += 1.0;
      } else if ((dx > 0.0) == (dy > 0.0)) {
        concordant += 1.0;
      } else {
        discordant += 1.0;
      }
    }
  const double n0 = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
  const double denom = std::sqrt((n0 - tied_x) * (n0 - tied_y));
  if (denom <= 0.0) throw Error(ErrorCode::DegenerateInput, "constant series");
  Correlation c{CorrelationMethod::Kendall, std::clamp((concordant - discordant) / denom, -1.0, 1.0), 1.0, n};

  // Variance of C - D under independence with tie groups (Kendall 1970).
  auto tie_terms = [](const std::vector<double>& v, double& a, double& b, double& t) {
    std::vector<double> s = v;
    std::sort(s.begin(), s.end());
    a = b = t = 0.0;
    for (std::size_t i = 0; i < s.size();) {
      std::size_t j = i;
      while (j + 1 < s.size() && s[j + 1] == s[i]) ++j;
      const double m = static_cast<double>(j - i + 1);
      a += m * (m - 1.0) * (2.0 * m + 5.0);
      b += m * (m - 1.0) * (m - 2.0);
      t += m * (m - 1.0);
      i = j + 1;
    }
  };
  double vx, bx, tx, vy, by, ty;
  tie_terms(x, vx, bx, tx);
  tie_terms(y, vy, by, ty);
  const double nn = static_cast<double>(n);
  double var = (nn * (nn - 1.0) * (2.0 * nn + 5.0) - vx - vy) / 18.0 +
               bx * by / (9.0 * nn * (nn - 1.0) * (nn - 2.0)) + tx * ty / (2.0 * nn * (nn - 1.0));
  if (var > 0.0) {
    const double z = (concordant - discordant) / std::sqrt(var);
    boost::math::normal_distribution<double> dist;
    c.p_value = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(z)));
  }
  return c;
}

inline Correlation correlate(const std::vector<ScorePair>& pairs, CorrelationMethod method) {
  std::vector<double> x, y;
  x.reserve(pairs.size());
  y.reserve(pairs.size());
  for (const auto& [m, h] : pairs) {
    x.push_back(m);
    y.push_back(h);
  }
  switch (method) {
    case CorrelationMethod::Pearson: return pearson(x, y);
    case CorrelationMethod::Spearman: return spearman(x, y);
    case CorrelationMethod::Kendall: return kendall(x, y);
  }
  throw Error(ErrorCode::Configuration, "unknown correlation method");
}

inline CorrelationReport correlation_report(const std::vector<ScorePair>& pairs) {
  return {correlate(pairs, CorrelationMethod::Pearson), correlate(pairs, CorrelationMethod::Spearman),
          correlate(pairs, CorrelationMethod::Kendall), pairs.size()};
}

}  // namespace smurf::harness
