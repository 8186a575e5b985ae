#pragma once

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "smurf/error.hpp"
#include "smurf/fusion.hpp"
#include "smurf/harness/ellipse.hpp"

namespace smurf::harness {

namespace detail {

inline std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace detail

struct StandardizedTriple {
  double sparcs = 0.0;
  double spurts = 0.0;
  double mima = 0.0;
};

struct SystemSummary {
  std::string name;
  Point2 mean = Point2::Zero();  // (sparcs', spurts')
  Eigen::Matrix2d covariance = Eigen::Matrix2d::Zero();
  double ellipse_scale = kEllipseScale;
  double overlap_with_human = 0.0;
  double total_grammar_penalty = 0.0;
  std::size_t count = 0;
};

struct SystemAnalysisOptions {
  std::string human_system = "human";
  std::size_t samples = kOverlapSamples;
  std::uint64_t seed = kOverlapSeed;
  double ellipse_scale = kEllipseScale;
};

/// Per-captioner ellipse in the (SPARCS', SPURTS') plane, its normalized
/// overlap |H n M| / |M| with the human ellipse, and the summed grammar
/// penalty. The human captioner appears in the output with overlap 1.
inline std::vector<SystemSummary> system_analysis(const std::map<std::string, std::vector<StandardizedTriple>>& scores,
                                                  const SystemAnalysisOptions& options = {}) {
  auto human_it = scores.find(options.human_system);
  if (human_it == scores.end())
    throw Error(ErrorCode::MissingHumanBaseline, "no captioner named \"" + options.human_system + "\"");
  for (const auto& [name, pts] : scores)
    if (pts.size() < 2) throw Error(ErrorCode::InsufficientPoints, "captioner " + name + " has fewer than 2 points");

  auto to_points = [](const std::vector<StandardizedTriple>& v) {
    std::vector<Point2> pts;
    pts.reserve(v.size());
    for (const auto& t : v) pts.emplace_back(t.sparcs, t.spurts);
    return pts;
  };
  const Moments2 human_moments = fit_moments(to_points(human_it->second));
  const Ellipse human(human_moments.mean, human_moments.covariance, options.ellipse_scale);

  std::vector<SystemSummary> out;
  for (const auto& [name, triples] : scores) {
    const Moments2 m = fit_moments(to_points(triples));
    SystemSummary s;
    s.name = name;
    s.mean = m.mean;
    s.covariance = m.covariance;
    s.ellipse_scale = options.ellipse_scale;
    s.count = triples.size();
    s.overlap_with_human =
        overlap_fraction(Ellipse(m.mean, m.covariance, options.ellipse_scale), human, options.samples, options.seed);
    for (const auto& t : triples) s.total_grammar_penalty += std::min(t.mima - kSemanticThreshold, 0.0);
    out.push_back(std::move(s));
  }
  return out;
}

inline nlohmann::json summaries_to_json(const std::vector<SystemSummary>& summaries) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& s : summaries) {
    arr.push_back({{"system", s.name},
                   {"count", s.count},
                   {"mean", {s.mean.x(), s.mean.y()}},
                   {"covariance",
                    {{s.covariance(0, 0), s.covariance(0, 1)}, {s.covariance(1, 0), s.covariance(1, 1)}}},
                   {"ellipse_scale", s.ellipse_scale},
                   {"overlap_with_human", s.overlap_with_human},
                   {"total_grammar_penalty", s.total_grammar_penalty}});
  }
  return arr;
}

inline std::string points_csv(const std::map<std::string, std::vector<StandardizedTriple>>& scores) {
  std::ostringstream out;
  out << "system,sparcs_std,spurts_std,mima_std\n";
  out.precision(10);
  for (const auto& [name, triples] : scores)
    for (const auto& t : triples) out << name << ',' << t.sparcs << ',' << t.spurts << ',' << t.mima << '\n';
  return out.str();
}

/// Scatter of every caption plus each captioner's ellipse.
inline std::string scatter_svg(const std::map<std::string, std::vector<StandardizedTriple>>& scores,
                               const std::vector<SystemSummary>& summaries) {
  static constexpr const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                            "#9467bd", "#8c564b", "#e377c2", "#17becf"};
  constexpr double width = 640, height = 480, margin = 50;
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& [_, triples] : scores)
    for (const auto& t : triples) {
      xmin = std::min(xmin, t.sparcs);
      xmax = std::max(xmax, t.sparcs);
      ymin = std::min(ymin, t.spurts);
      ymax = std::max(ymax, t.spurts);
    }
  if (xmax <= xmin) xmax = xmin + 1;
  if (ymax <= ymin) ymax = ymin + 1;
  auto sx = [&](double x) { return margin + (x - xmin) / (xmax - xmin) * (width - 2 * margin); };
  auto sy = [&](double y) { return height - margin - (y - ymin) / (ymax - ymin) * (height - 2 * margin); };

  std::ostringstream svg;
  char buf[256];
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << width / 2 << "\" y=\"" << height - 10 << "\" text-anchor=\"middle\">SPARCS'</text>\n";
  svg << "<text x=\"15\" y=\"" << height / 2 << "\" transform=\"rotate(-90 15 " << height / 2
      << ")\" text-anchor=\"middle\">SPURTS'</text>\n";
  std::size_t color = 0;
  for (const auto& [name, triples] : scores) {
    const char* c = palette[color++ % std::size(palette)];
    for (const auto& t : triples) {
      std::snprintf(buf, sizeof buf, "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"2\" fill=\"%s\" fill-opacity=\"0.5\"/>\n",
                    sx(t.sparcs), sy(t.spurts), c);
      svg << buf;
    }
    auto sit = std::find_if(summaries.begin(), summaries.end(), [&](const SystemSummary& s) { return s.name == name; });
    if (sit != summaries.end()) {
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(sit->covariance);
      std::ostringstream path;
      for (int k = 0; k <= 72; ++k) {
        const double a = 2.0 * std::numbers::pi * k / 72.0;
        const Point2 unit(std::cos(a), std::sin(a));
        const Point2 p = sit->mean + sit->ellipse_scale * (eig.eigenvectors() *
                                                           (eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() * unit));
        std::snprintf(buf, sizeof buf, "%s%.2f,%.2f ", k ? "L" : "M", sx(p.x()), sy(p.y()));
        path << buf;
      }
      svg << "<path d=\"" << path.str() << "Z\" fill=\"none\" stroke=\"" << c << "\" stroke-width=\"2\"/>\n";
    }
    std::snprintf(buf, sizeof buf, "<text x=\"%.0f\" y=\"%.0f\" fill=\"%s\">", width - margin - 100.0,
                  margin + 16.0 * static_cast<double>(color), c);
    svg << buf << detail::xml_escape(name) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace smurf::harness
