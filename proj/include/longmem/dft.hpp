#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace longmem {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;
using RealVector = std::vector<double>;

enum class Direction { forward, inverse };

/// Which algorithm backs transforms and convolutions. `dense` is the
/// O(n^2) reference path, kept permanently for oracle checks.
enum class TransformPath { fast, dense };

/**
 * Precomputed plan for a unitary DFT of fixed length.
 *
 * Lengths whose prime factors are all small go through a recursive
 * mixed-radix Cooley-Tukey; anything with a large prime factor is
 * routed through Bluestein's chirp-z on a power-of-two inner plan.
 * A plan is immutable after construction and may be shared between
 * threads; `execute` allocates its own scratch.
 *
 * Convention: forward X_k = n^(-1/2) sum_j x_j e^(-2 pi i jk/n),
 * inverse uses e^(+2 pi i jk/n) and the same n^(-1/2) factor.
 */
class FftPlan {
 public:
  explicit FftPlan(std::size_t n);

  std::size_t size() const noexcept { return n_; }

  ComplexVector execute(std::span<const Complex> x, Direction dir) const;

  /// Unnormalized transform in place (no n^(-1/2)).
  void execute_unscaled(std::span<Complex> data, Direction dir) const;

 private:
  void mixed_radix(const Complex* in, Complex* out, std::size_t n, std::size_t stride,
                   std::size_t factor_index, Direction dir, Complex* scratch) const;
  void bluestein(std::span<Complex> data, Direction dir) const;

  std::size_t n_;
  std::vector<std::size_t> factors_;
  ComplexVector twiddles_;      // e^(-2 pi i k/n), k < n
  ComplexVector twiddles_inv_;  // conjugates of twiddles_

  bool use_bluestein_ = false;
  std::size_t padded_ = 0;
  ComplexVector chirp_;             // e^(-i pi k^2/n)
  ComplexVector chirp_spectrum_;    // FFT of conj(chirp) kernel, length padded_
  std::vector<FftPlan> inner_;      // power-of-two plan (0 or 1 entries)
};

/// Unitary DFT; plans are cached per length.
ComplexVector unitary_dft(std::span<const Complex> x, Direction dir,
                          TransformPath path = TransformPath::fast);

/// Direct O(n^2) summation. Reference implementation for the fast path.
ComplexVector unitary_dft_naive(std::span<const Complex> x, Direction dir);

/// w_i = sum_j row_((i-j) mod n) v_j for equal odd lengths.
RealVector circular_convolve(std::span<const double> row, std::span<const double> v,
                             TransformPath path = TransformPath::fast);

/// Builds the dense circulant whose first column is `row` and multiplies.
/// Parallel over output rows; each row is summed in a fixed order so the
/// result does not depend on the thread count.
RealVector circular_convolve_dense(std::span<const double> row, std::span<const double> v);

/**
 * A real circulant operator with its spectrum cached, for repeated
 * application to many vectors of the same length.
 */
class CirculantOperator {
 public:
  CirculantOperator(RealVector row, TransformPath path = TransformPath::fast);

  std::size_t size() const noexcept { return row_.size(); }
  const RealVector& row() const noexcept { return row_; }
  TransformPath path() const noexcept { return path_; }

  RealVector apply(std::span<const double> v) const;

 private:
  RealVector row_;
  double row_norm_;
  TransformPath path_;
  std::shared_ptr<const FftPlan> plan_;
  ComplexVector spectrum_;  // unscaled forward DFT of row_
};

}  // namespace longmem
