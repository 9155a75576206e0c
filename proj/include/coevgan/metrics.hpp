#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "coevgan/mlp.hpp"
#include "coevgan/toy_model.hpp"

namespace coevgan {

struct ClassDistribution {
  std::vector<std::uint64_t> counts;
  std::vector<double> ideal;

  static ClassDistribution uniform_ideal(std::vector<std::uint64_t> counts);
};

/// Half the L1 distance between empirical class proportions and the ideal ones.
double tvd(const ClassDistribution& dist);

/// Mean/Std/Median/Iqr/Min/Max, the column layout of the result tables.
struct SummaryStats {
  double mean = 0.0;
  double stddev = 0.0;
  double median = 0.0;
  double iqr = 0.0;
  double min = 0.0;
  double max = 0.0;
  std::size_t count = 0;
};

/// Sample standard deviation; quartiles by linear interpolation between order statistics.
SummaryStats summarize(std::vector<double> values);

struct DiversityReport {
  std::vector<std::vector<double>> distances;  // symmetric, zero diagonal
  SummaryStats stats;                          // over the strict upper triangle
};

/// Pairwise Euclidean distances between equal-length parameter vectors.
DiversityReport l2_diversity(std::span<const std::vector<double>> params);

/// Fraction of runs whose distance is strictly below `threshold`.
double success_rate(std::span<const double> distances, double threshold);
double success_rate(std::span<const toy::ToyGenerator> finals, const toy::ToyTarget& target,
                    double threshold);

/// Nearest-center labelling of 2D samples. Samples farther than
/// `reject_sigmas * stddev` from every center land in the reject bucket.
struct ModeAssignment {
  std::vector<std::uint64_t> counts;
  std::uint64_t rejected = 0;
  std::uint64_t total = 0;

  double low_quality_fraction() const;
};

ModeAssignment assign_modes(const nn::Matrix& samples, std::span<const std::array<double, 2>> centers,
                            double stddev, double reject_sigmas = 3.0);

/// TVD over accepted samples against uniform mode proportions plus the
/// low-quality fraction. 2.0 when every sample is rejected.
double ensemble_quality_score(const ModeAssignment& assignment);
double ensemble_tvd(const ModeAssignment& assignment);

}  // namespace coevgan
