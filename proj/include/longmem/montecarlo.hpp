#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "longmem/estimators.hpp"
#include "longmem/spectral_model.hpp"

namespace longmem {

struct MonteCarloReport {
  double beta = 0.0;
  std::size_t n = 0;
  std::size_t replicates = 0;
  std::uint64_t seed = 0;
  EigenReport eigen;

  double mean_d = 0.0;
  double mean_alpha = 0.0;
  double mean_var = 0.0;
  double cv_d = 0.0;  // sample sd / mean, (replicates - 1) denominator
  double cv_alpha = 0.0;
  double cv_var = 0.0;

  /// Per-replicate measurements, indexed by stream index.
  std::vector<SampleStats> per_replicate;
};

/// Replicate i draws from RngStream(seed, i). Replicates run on up to
/// `workers` OpenMP threads; aggregation is in index order, so the report
/// is bit-identical for every worker count.
MonteCarloReport run_study(const SpectralModel& model, std::size_t replicates, std::uint64_t seed,
                           std::size_t workers = 1);

MonteCarloReport run_study(double beta, std::size_t n, std::size_t replicates, std::uint64_t seed,
                           std::size_t workers = 1, TransformPath path = TransformPath::fast);

/// Plain sequential loop; reference for run_study.
MonteCarloReport run_study_serial(const SpectralModel& model, std::size_t replicates,
                                  std::uint64_t seed);

/// Pools the standardized vectors of `replicates` generated series into one
/// histogram.
Histogram histogram_study(const SpectralModel& model, std::size_t replicates, std::size_t bin_count,
                          std::uint64_t seed, std::size_t workers = 1);

Histogram histogram_study_serial(const SpectralModel& model, std::size_t replicates,
                                 std::size_t bin_count, std::uint64_t seed);

}  // namespace longmem
