#pragma once

#include <cstddef>
#include <vector>

#include "longmem/dft.hpp"

namespace longmem {

/// Frequencies in cycles/sample over the Nyquist range, skipping zero:
/// negative side -1/2, -1/2 + 1/n, ... (up to -1/n), the centre 1/(2n),
/// then the mirrored positive side.
struct FrequencyGrid {
  std::size_t n = 0;   // requested resolution
  std::size_t rn = 0;  // measured (odd) length
  RealVector frequencies;
};

FrequencyGrid build_grid(std::size_t n);

inline constexpr double kMinBeta = 0.0;
inline constexpr double kMaxBeta = 10.0;

/**
 * The deterministic half of the long-memory model.
 *
 * `density` is |f|^(-beta/2) on the grid. `first_row` is the first row of
 * the normalized circulant: rn^(-1/2) times the moduli of the unitary
 * inverse DFT of `density`. `eigenvalues` holds the circulant spectrum
 * sorted in descending order.
 */
class SpectralModel {
 public:
  double beta() const noexcept { return beta_; }
  const FrequencyGrid& grid() const noexcept { return grid_; }
  std::size_t rn() const noexcept { return grid_.rn; }
  const RealVector& density() const noexcept { return density_; }
  const RealVector& first_row() const noexcept { return first_row_; }
  const RealVector& eigenvalues() const noexcept { return eigenvalues_; }
  TransformPath path() const noexcept { return path_; }

 private:
  friend SpectralModel build_model(double beta, std::size_t n, TransformPath path);

  double beta_ = 0.0;
  FrequencyGrid grid_;
  RealVector density_;
  RealVector first_row_;
  RealVector eigenvalues_;
  TransformPath path_ = TransformPath::fast;
};

SpectralModel build_model(double beta, std::size_t n, TransformPath path = TransformPath::fast);

/// Statistics read directly off the operator spectrum.
struct EigenReport {
  double d_raw = 0.0;      // trace / spectral norm
  double E = 0.0;          // first step of the two-step dimension estimate
  double d_est = 0.0;
  double alpha_est = 0.0;  // (d_est - 1) / 2
  double var_est = 0.0;    // mean of squared non-leading eigenvalues
  double kappa = 0.0;      // lambda_max / lambda_min
  double slope_fit = 0.0;  // log-log eigenvalue slope over ranks 2..ceil(rn/2)
};

/// Calibration constant of the two-step intrinsic dimension estimate.
inline constexpr double kDimensionShrink = 4.2;

EigenReport eigen_report(const SpectralModel& model);

/// Row-major dense matrix; only used on oracle and debug paths.
struct RealMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  RealVector data;

  double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
  double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
};

inline constexpr std::size_t kDenseOperatorLimit = 4096;

/// Full rn x rn circulant, each row the previous one shifted right by one.
RealMatrix dense_operator(const SpectralModel& model);

/// Same construction from an arbitrary row; rejects even lengths.
RealMatrix dense_circulant(std::span<const double> first_row);

}  // namespace longmem
