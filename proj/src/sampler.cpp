#include "longmem/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "longmem/errors.hpp"

namespace longmem {
namespace {

std::mt19937_64 seeded_engine(std::uint64_t seed, std::uint64_t stream_index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream_index),
                    static_cast<std::uint32_t>(stream_index >> 32)};
  return std::mt19937_64(seq);
}

double l2_norm(std::span<const double> x) {
  double s = 0.0;
  for (double e : x) s += e * e;
  return std::sqrt(s);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_index)
    : seed_(seed), stream_index_(stream_index), engine_(seeded_engine(seed, stream_index)) {}

double RngStream::next_open_unit() {
  // 53 random mantissa bits, shifted off zero.
  return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
}

double RngStream::next_normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double radius = std::sqrt(-2.0 * std::log(next_open_unit()));
  const double angle = 2.0 * std::numbers::pi * next_open_unit();
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

RealVector draw_epsilon(RngStream& rng, std::size_t rn) {
  if (rn < 3 || rn % 2 == 0) {
    throw InvalidArgument("draw_epsilon: length must be odd and >= 3, got " + std::to_string(rn));
  }
  RealVector out(rn);
  for (auto& e : out) e = rng.next_normal();
  return out;
}

SeriesSample generate(const CirculantOperator& op, RngStream& rng) {
  SeriesSample s;
  s.seed = rng.seed();
  s.stream_index = rng.stream_index();
  s.epsilon = draw_epsilon(rng, op.size());
  s.series = op.apply(s.epsilon);

  const double scale = l2_norm(op.row()) * l2_norm(s.epsilon);
  s.cosvec.resize(s.series.size());
  std::transform(s.series.begin(), s.series.end(), s.cosvec.begin(), [scale](double x) { return x / scale; });
  s.standardized = standardize(s.cosvec);
  return s;
}

SeriesSample generate(const SpectralModel& model, RngStream& rng) {
  return generate(CirculantOperator(model.first_row(), model.path()), rng);
}

RealVector standardize(std::span<const double> cosvec) {
  if (cosvec.empty()) throw InvalidArgument("standardize: empty input");
  const auto [lo_it, hi_it] = std::minmax_element(cosvec.begin(), cosvec.end());
  const double lo = *lo_it;
  const double range = *hi_it - lo;
  if (!(range > 0.0)) throw DegenerateSampleError("standardize: constant vector has zero range");

  RealVector out(cosvec.size());
  for (std::size_t i = 0; i < cosvec.size(); ++i) out[i] = (cosvec[i] - lo) / range;
  return out;
}

}  // namespace longmem
