#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "smurf/error.hpp"

namespace smurf::harness {

/// Scale of the confidence ellipse in standard deviations; 1.15 sigma
/// encloses about 75% of a bivariate normal.
inline constexpr double kEllipseScale = 1.15;
inline constexpr std::size_t kOverlapSamples = 1'000'000;
inline constexpr std::uint64_t kOverlapSeed = 20210801;

using Point2 = Eigen::Vector2d;

/// Level set {x : (x - center)^T cov^-1 (x - center) <= scale^2}.
struct Ellipse {
  Point2 center = Point2::Zero();
  Eigen::Matrix2d covariance = Eigen::Matrix2d::Identity();
  double scale = kEllipseScale;

  Ellipse() = default;
  Ellipse(Point2 c, Eigen::Matrix2d cov, double s = kEllipseScale) : center(c), covariance(cov), scale(s) {
    if (!(covariance.determinant() > 0.0))
      throw Error(ErrorCode::DegenerateInput, "ellipse covariance must be positive definite");
    precision_ = covariance.inverse();
  }

  bool contains(const Point2& p) const {
    const Point2 d = p - center;
    return d.dot(precision_ * d) <= scale * scale;
  }

  double area() const { return std::numbers::pi * scale * scale * std::sqrt(covariance.determinant()); }

  /// Axis-aligned half extents of the bounding box.
  Point2 half_extent() const {
    return {scale * std::sqrt(covariance(0, 0)), scale * std::sqrt(covariance(1, 1))};
  }

 private:
  Eigen::Matrix2d precision_ = Eigen::Matrix2d::Identity();
};

struct Moments2 {
  Point2 mean = Point2::Zero();
  Eigen::Matrix2d covariance = Eigen::Matrix2d::Zero();
};

/// Mean and population covariance of a point cloud.
inline Moments2 fit_moments(const std::vector<Point2>& points) {
  if (points.size() < 2) throw Error(ErrorCode::InsufficientPoints, "need at least two points");
  Moments2 m;
  for (const auto& p : points) m.mean += p;
  m.mean /= static_cast<double>(points.size());
  for (const auto& p : points) {
    const Point2 d = p - m.mean;
    m.covariance += d * d.transpose();
  }
  m.covariance /= static_cast<double>(points.size());
  return m;
}

namespace detail {

inline double unit_double(std::mt19937_64& gen) { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }

}  // namespace detail

/// Fraction of `machine`'s area that also lies inside `human`, estimated by
/// rejection sampling `samples` points uniformly inside `machine` from its
/// bounding box. Bit-reproducible for a given seed.
inline double overlap_fraction(const Ellipse& machine, const Ellipse& human, std::size_t samples = kOverlapSamples,
                               std::uint64_t seed = kOverlapSeed) {
  if (samples == 0) throw Error(ErrorCode::InsufficientData, "need at least one sample");
  std::mt19937_64 gen(seed);
  const Point2 half = machine.half_extent();
  const Point2 lo = machine.center - half;
  std::size_t accepted = 0, inside = 0;
  while (accepted < samples) {
    const Point2 p{lo.x() + 2.0 * half.x() * detail::unit_double(gen),
                   lo.y() + 2.0 * half.y() * detail::unit_double(gen)};
    if (!machine.contains(p)) continue;
    ++accepted;
    if (human.contains(p)) ++inside;
  }
  return static_cast<double>(inside) / static_cast<double>(samples);
}

}  // namespace smurf::harness
