#include "longmem/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "longmem/errors.hpp"

namespace longmem {

SampleStats sample_stats(std::span<const double> series) {
  if (series.size() < 2) throw InvalidArgument("sample_stats: need at least 2 points");
  const auto count = static_cast<double>(series.size());
  double mean = 0.0;
  for (double x : series) mean += x;
  mean /= count;
  double ss = 0.0;
  for (double x : series) ss += (x - mean) * (x - mean);

  const auto [lo, hi] = std::minmax_element(series.begin(), series.end());
  SampleStats s;
  s.range = *hi - *lo;
  if (!(s.range > 0.0)) throw DegenerateSampleError("sample_stats: constant series");
  s.variance = ss / (count - 1.0);
  s.ratio = s.variance / (s.range * s.range);
  s.alpha_meas = (s.range * s.range) / (8.0 * s.variance) - 0.5;
  s.d_meas = dimension_from_alpha(s.alpha_meas);
  return s;
}

Histogram::Histogram(std::size_t bin_count) {
  if (bin_count < 2) throw InvalidArgument("Histogram: bin_count must be >= 2");
  counts_.assign(bin_count, 0);
  edges_.resize(bin_count + 1);
  for (std::size_t i = 0; i <= bin_count; ++i) {
    edges_[i] = static_cast<double>(i) / static_cast<double>(bin_count);
  }
}

std::size_t Histogram::bin_of(double v) const {
  const std::size_t bins = counts_.size();
  const double scaled = std::ceil(v * static_cast<double>(bins));
  std::size_t idx = scaled < 1.0 ? 0 : std::min(bins - 1, static_cast<std::size_t>(scaled) - 1);
  // Settle rounding at the edges so (edges[idx], edges[idx+1]] holds v.
  while (idx > 0 && v <= edges_[idx]) --idx;
  while (idx + 1 < bins && v > edges_[idx + 1]) ++idx;
  return idx;
}

void Histogram::add(std::span<const double> values) {
  for (double v : values) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw InvalidArgument("Histogram::add: value outside [0, 1]: " + std::to_string(v));
    }
    if (v == 0.0 || v == 1.0) continue;
    ++counts_[bin_of(v)];
    ++sample_count_;
  }
}

void Histogram::merge(const Histogram& other) {
  if (other.bin_count() != bin_count()) throw InvalidArgument("Histogram::merge: bin counts differ");
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
  sample_count_ += other.sample_count_;
}

RealVector Histogram::densities() const {
  RealVector out(counts_.size(), 0.0);
  if (sample_count_ == 0) return out;
  const auto total = static_cast<double>(sample_count_);
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    out[i] = static_cast<double>(counts_[i]) / (total * bin_width(i));
  }
  return out;
}

Histogram accumulate_histogram(std::span<const RealVector> samples, std::size_t bin_count) {
  if (samples.empty()) throw InvalidArgument("accumulate_histogram: no samples");
  Histogram h(bin_count);
  for (const auto& s : samples) h.add(s);
  return h;
}

double fit_alpha_from_histogram(const Histogram& h) {
  if (h.sample_count() < kMinFitSamples) {
    throw InsufficientDataError("fit_alpha_from_histogram: " + std::to_string(h.sample_count()) +
                                " samples, need " + std::to_string(kMinFitSamples));
  }
  const auto total = static_cast<double>(h.sample_count());
  double spread = 0.0;
  for (std::size_t i = 0; i < h.bin_count(); ++i) {
    const double offset = h.bin_center(i) - 0.5;
    spread += static_cast<double>(h.counts()[i]) / total * offset * offset;
  }
  // Any law on [0, 1] has variance about 1/2 at most 1/4.
  spread = std::clamp(spread, 0.0, 0.25);
  if (spread == 0.0) return std::numeric_limits<double>::infinity();
  return alpha_from_ratio(spread);
}

std::string_view classify_shape(double alpha) {
  if (alpha < 0.75) return "arcsine";
  if (alpha < 1.25) return "uniform";
  if (alpha < 2.0) return "wigner-semicircle";
  return "truncated-normal";
}

}  // namespace longmem
