#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "longmem/dft.hpp"

namespace longmem {

// Symmetric beta law on [0, 1] with shape alpha: var / range^2 = 1 / (8 alpha + 4).
// On the unit sphere S^(d-1), a projected coordinate gives alpha = (d - 1) / 2.
inline double ratio_from_alpha(double alpha) { return 1.0 / (8.0 * alpha + 4.0); }
inline double alpha_from_ratio(double ratio) { return 1.0 / (8.0 * ratio) - 0.5; }
inline double dimension_from_alpha(double alpha) { return 2.0 * alpha + 1.0; }
inline double alpha_from_dimension(double d) { return (d - 1.0) / 2.0; }

struct SampleStats {
  double variance = 0.0;  // (length - 1) denominator
  double range = 0.0;
  double ratio = 0.0;     // variance / range^2
  double alpha_meas = 0.0;
  double d_meas = 0.0;
};

/// Shape statistics of one series. Throws DegenerateSampleError for a
/// constant series.
SampleStats sample_stats(std::span<const double> series);

/**
 * Area-normalized histogram on uniform bins over [0, 1].
 *
 * Bins are right-closed, (a, b]. Values exactly 0 or 1 are the artifacts of
 * per-replicate standardization and are dropped on insertion. Counts are
 * integers, so merging partial histograms is exact and order-independent.
 */
class Histogram {
 public:
  explicit Histogram(std::size_t bin_count);

  std::size_t bin_count() const noexcept { return counts_.size(); }
  std::uint64_t sample_count() const noexcept { return sample_count_; }
  const RealVector& edges() const noexcept { return edges_; }
  const std::vector<std::uint64_t>& counts() const noexcept { return counts_; }
  double bin_width(std::size_t i) const { return edges_[i + 1] - edges_[i]; }
  double bin_center(std::size_t i) const { return 0.5 * (edges_[i] + edges_[i + 1]); }

  /// Densities such that sum density_i * width_i = 1 (all zero when empty).
  RealVector densities() const;

  void add(std::span<const double> values);
  void merge(const Histogram& other);

 private:
  std::size_t bin_of(double v) const;

  RealVector edges_;
  std::vector<std::uint64_t> counts_;
  std::uint64_t sample_count_ = 0;
};

Histogram accumulate_histogram(std::span<const RealVector> samples, std::size_t bin_count);

inline constexpr std::uint64_t kMinFitSamples = 10'000;

/// Moment fit of the symmetric beta shape from the histogram's variance
/// about 1/2, computed on bin centres.
double fit_alpha_from_histogram(const Histogram& h);

/// Nearest named member of the symmetric beta family: "arcsine" (alpha 1/2),
/// "uniform" (1), "wigner-semicircle" (3/2), or "truncated-normal" above 2.
std::string_view classify_shape(double alpha);

}  // namespace longmem
