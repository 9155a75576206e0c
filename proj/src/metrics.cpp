#include "coevgan/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace coevgan {

ClassDistribution ClassDistribution::uniform_ideal(std::vector<std::uint64_t> counts) {
  const auto k = counts.size();
  return {std::move(counts), std::vector<double>(k, k ? 1.0 / static_cast<double>(k) : 0.0)};
}

double tvd(const ClassDistribution& dist) {
  if (dist.counts.size() != dist.ideal.size())
    throw std::domain_error("class counts and ideal proportions differ in length");
  const double total = std::accumulate(dist.counts.begin(), dist.counts.end(), 0.0);
  if (!(total > 0.0)) throw std::domain_error("tvd of an empty class distribution");
  // Extended accumulator: summing many rounded terms in double drifts by a few ulps,
  // enough to miss boundary values such as 0.9 for a single class out of ten.
  long double acc = 0.0L;
  for (std::size_t i = 0; i < dist.counts.size(); ++i)
    acc += std::abs(static_cast<double>(dist.counts[i]) / total - dist.ideal[i]);
  return static_cast<double>(0.5L * acc);
}

namespace {

double quantile_sorted(const std::vector<double>& v, double q) {
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return v[lo] + frac * (v[hi] - v[lo]);
}

}  // namespace

SummaryStats summarize(std::vector<double> values) {
  SummaryStats s;
  s.count = values.size();
  if (values.empty()) return s;
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(ss / (n - 1.0));
  }
  s.median = quantile_sorted(values, 0.5);
  s.iqr = quantile_sorted(values, 0.75) - quantile_sorted(values, 0.25);
  s.min = values.front();
  s.max = values.back();
  return s;
}

DiversityReport l2_diversity(std::span<const std::vector<double>> params) {
  const std::size_t n = params.size();
  DiversityReport r;
  r.distances.assign(n, std::vector<double>(n, 0.0));
  std::vector<double> upper;
  for (std::size_t i = 0; i < n; ++i) {
    if (params[i].size() != params[0].size())
      throw std::domain_error("parameter vectors differ in length");
    for (std::size_t j = i + 1; j < n; ++j) {
      double ss = 0.0;
      for (std::size_t k = 0; k < params[i].size(); ++k) {
        const double d = params[i][k] - params[j][k];
        ss += d * d;
      }
      const double dist = std::sqrt(ss);
      r.distances[i][j] = r.distances[j][i] = dist;
      upper.push_back(dist);
    }
  }
  r.stats = summarize(std::move(upper));
  return r;
}

double success_rate(std::span<const double> distances, double threshold) {
  if (!(threshold > 0.0)) throw std::domain_error("success threshold must be positive");
  if (distances.empty()) throw std::domain_error("success rate over zero runs");
  const auto hits = std::count_if(distances.begin(), distances.end(),
                                  [threshold](double d) { return d < threshold; });
  return static_cast<double>(hits) / static_cast<double>(distances.size());
}

double success_rate(std::span<const toy::ToyGenerator> finals, const toy::ToyTarget& target,
                    double threshold) {
  std::vector<double> d;
  d.reserve(finals.size());
  for (const auto& g : finals) d.push_back(toy::generator_distance(g, target));
  return success_rate(d, threshold);
}

double ModeAssignment::low_quality_fraction() const {
  return total ? static_cast<double>(rejected) / static_cast<double>(total) : 0.0;
}

ModeAssignment assign_modes(const nn::Matrix& samples, std::span<const std::array<double, 2>> centers,
                            double stddev, double reject_sigmas) {
  if (samples.rows() != 2) throw std::domain_error("mode assignment expects 2D samples");
  if (centers.empty()) throw std::domain_error("mode assignment needs at least one center");
  ModeAssignment a;
  a.counts.assign(centers.size(), 0);
  const double radius = reject_sigmas * stddev;
  for (Eigen::Index k = 0; k < samples.cols(); ++k) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t arg = 0;
    for (std::size_t c = 0; c < centers.size(); ++c) {
      const double d = std::hypot(samples(0, k) - centers[c][0], samples(1, k) - centers[c][1]);
      if (d < best) {
        best = d;
        arg = c;
      }
    }
    ++a.total;
    if (best > radius || !std::isfinite(best))
      ++a.rejected;
    else
      ++a.counts[arg];
  }
  return a;
}

double ensemble_tvd(const ModeAssignment& assignment) {
  if (assignment.total == assignment.rejected) return 1.0;
  return tvd(ClassDistribution::uniform_ideal(assignment.counts));
}

double ensemble_quality_score(const ModeAssignment& assignment) {
  if (assignment.total == 0) throw std::domain_error("quality score of zero samples");
  return ensemble_tvd(assignment) + assignment.low_quality_fraction();
}

}  // namespace coevgan
