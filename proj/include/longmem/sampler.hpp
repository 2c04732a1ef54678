#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>

#include "longmem/dft.hpp"
#include "longmem/spectral_model.hpp"

namespace longmem {

/// Name of the normal generator, echoed in every output file.
inline constexpr std::string_view kGeneratorName = "mt19937_64/box-muller";

/**
 * Reproducible N(0,1) stream keyed by (seed, stream_index).
 *
 * The engine is seeded through std::seed_seq from all four 32-bit halves of
 * the key, so each replicate index gets its own stream. Normals use the
 * Box-Muller transform and consume both variates of each pair. Not
 * shareable between threads.
 */
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_index);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_index() const noexcept { return stream_index_; }

  double next_normal();

 private:
  double next_open_unit();  // uniform on (0, 1]

  std::uint64_t seed_;
  std::uint64_t stream_index_;
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

RealVector draw_epsilon(RngStream& rng, std::size_t rn);

struct SeriesSample {
  RealVector epsilon;
  RealVector series;
  RealVector cosvec;        // series / (||first_row|| ||epsilon||), in [-1, 1]
  RealVector standardized;  // cosvec mapped affinely onto [0, 1]
  std::uint64_t seed = 0;
  std::uint64_t stream_index = 0;
};

/// Draws epsilon from `rng` and convolves it with the model's circulant.
SeriesSample generate(const SpectralModel& model, RngStream& rng);

/// Variant reusing a prepared operator; the hot path of the replicate loops.
SeriesSample generate(const CirculantOperator& op, RngStream& rng);

/// (x - min) / (max - min); endpoints are exactly 0 and 1.
RealVector standardize(std::span<const double> cosvec);

}  // namespace longmem
