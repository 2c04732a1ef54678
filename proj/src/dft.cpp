#include "longmem/dft.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "longmem/errors.hpp"

namespace longmem {
namespace {

constexpr std::size_t kMaxDirectRadix = 13;
constexpr double kResidueTolerance = 1e-9;

std::vector<std::size_t> prime_factors(std::size_t n) {
  std::vector<std::size_t> out;
  for (std::size_t p = 2; p * p <= n; ++p) {
    while (n % p == 0) {
      out.push_back(p);
      n /= p;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

// Plain complex product; std::complex operator* adds NaN recovery that
// dominates the butterfly cost.
inline Complex mul(Complex a, Complex b) {
  return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

Complex unit_root(std::size_t k, std::size_t n) {
  const double angle = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
  return {std::cos(angle), std::sin(angle)};
}

template <typename Range>
void require_finite(const Range& values, const char* what) {
  for (const auto& v : values) {
    if (!std::isfinite(std::real(v)) || !std::isfinite(std::imag(v))) {
      throw InvalidArgument(std::string(what) + ": non-finite component");
    }
  }
}

void require_convolvable(std::span<const double> row, std::span<const double> v) {
  if (row.empty() || v.empty()) throw InvalidArgument("circular_convolve: empty input");
  if (row.size() != v.size()) {
    throw InvalidArgument("circular_convolve: length mismatch (" + std::to_string(row.size()) +
                          " vs " + std::to_string(v.size()) + ")");
  }
  if (row.size() % 2 == 0) {
    throw UnsupportedLength("circular_convolve: even length " + std::to_string(row.size()) +
                            " not supported, operator length must be odd");
  }
  require_finite(row, "circular_convolve");
  require_finite(v, "circular_convolve");
}

double l2_norm(std::span<const double> x) {
  double s = 0.0;
  for (double e : x) s += e * e;
  return std::sqrt(s);
}

// Drops the imaginary part of a real-input convolution after checking that
// it is round-off. Every output component is bounded by ||row|| ||v||.
RealVector take_real(const ComplexVector& c, double scale) {
  RealVector out(c.size());
  const double limit = kResidueTolerance * std::max(scale, std::numeric_limits<double>::min());
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (std::abs(c[i].imag()) > limit) {
      throw InternalConsistencyError("circular_convolve: imaginary residue " +
                                     std::to_string(std::abs(c[i].imag())) + " exceeds " +
                                     std::to_string(limit));
    }
    out[i] = c[i].real();
  }
  return out;
}

// Plans for recently used lengths, shared across threads.
std::shared_ptr<const FftPlan> cached_plan(std::size_t n) {
  constexpr std::size_t kMaxCachedPlans = 32;
  static std::mutex mutex;
  static std::map<std::size_t, std::shared_ptr<const FftPlan>> plans;
  {
    const std::lock_guard lock(mutex);
    if (auto it = plans.find(n); it != plans.end()) return it->second;
  }
  auto plan = std::make_shared<const FftPlan>(n);
  const std::lock_guard lock(mutex);
  if (plans.size() >= kMaxCachedPlans) plans.clear();
  return plans.try_emplace(n, std::move(plan)).first->second;
}

}  // namespace

FftPlan::FftPlan(std::size_t n) : n_(n) {
  if (n == 0) throw InvalidArgument("FftPlan: length must be >= 1");
  factors_ = prime_factors(n);
  use_bluestein_ = !factors_.empty() && factors_.back() > kMaxDirectRadix;

  if (!use_bluestein_) {
    twiddles_.resize(n);
    twiddles_inv_.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      twiddles_[k] = unit_root(k, n);
      twiddles_inv_[k] = std::conj(twiddles_[k]);
    }
    return;
  }

  padded_ = 1;
  while (padded_ < 2 * n - 1) padded_ <<= 1;
  inner_.emplace_back(padded_);

  chirp_.resize(n);
  const std::size_t period = 2 * n;
  // k^2 mod 2n, advanced incrementally ((k+1)^2 = k^2 + 2k + 1), keeps the angle small.
  std::size_t k2 = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double angle = -std::numbers::pi * static_cast<double>(k2) / static_cast<double>(n);
    chirp_[k] = {std::cos(angle), std::sin(angle)};
    k2 = (k2 + (2 * k + 1) % period) % period;
  }
  chirp_spectrum_.assign(padded_, Complex{});
  chirp_spectrum_[0] = std::conj(chirp_[0]);
  for (std::size_t k = 1; k < n; ++k) {
    chirp_spectrum_[k] = std::conj(chirp_[k]);
    chirp_spectrum_[padded_ - k] = std::conj(chirp_[k]);
  }
  inner_.front().execute_unscaled(chirp_spectrum_, Direction::forward);
}

void FftPlan::mixed_radix(const Complex* in, Complex* out, std::size_t n, std::size_t stride,
                          std::size_t factor_index, Direction dir, Complex* scratch) const {
  if (n == 1) {
    out[0] = in[0];
    return;
  }
  const std::size_t p = factors_[factor_index];
  const std::size_t m = n / p;
  for (std::size_t q = 0; q < p; ++q) {
    mixed_radix(in + q * stride, out + q * m, m, stride * p, factor_index + 1, dir, scratch);
  }

  const Complex* w = dir == Direction::inverse ? twiddles_inv_.data() : twiddles_.data();
  const std::size_t step = n_ / n;        // W_n = W_N^step
  const std::size_t radix_step = n_ / p;  // W_p = W_N^radix_step

  if (p == 2) {
    for (std::size_t k = 0; k < m; ++k) {
      const Complex a = out[k];
      const Complex b = mul(out[m + k], w[k * step]);
      out[k] = a + b;
      out[m + k] = a - b;
    }
    return;
  }

  for (std::size_t k = 0; k < m; ++k) {
    scratch[0] = out[k];
    for (std::size_t q = 1; q < p; ++q) scratch[q] = mul(out[q * m + k], w[q * k * step]);
    for (std::size_t r = 0; r < p; ++r) {
      Complex acc = scratch[0];
      for (std::size_t q = 1; q < p; ++q) acc += mul(scratch[q], w[(q * r % p) * radix_step]);
      out[r * m + k] = acc;
    }
  }
}

void FftPlan::bluestein(std::span<Complex> data, Direction dir) const {
  // inverse(x) = conj(forward(conj(x)))
  const bool inverse = dir == Direction::inverse;
  ComplexVector work(padded_, Complex{});
  for (std::size_t j = 0; j < n_; ++j) {
    const Complex x = inverse ? std::conj(data[j]) : data[j];
    work[j] = mul(x, chirp_[j]);
  }
  const FftPlan& inner = inner_.front();
  inner.execute_unscaled(work, Direction::forward);
  for (std::size_t k = 0; k < padded_; ++k) work[k] = mul(work[k], chirp_spectrum_[k]);
  inner.execute_unscaled(work, Direction::inverse);
  const double scale = 1.0 / static_cast<double>(padded_);
  for (std::size_t k = 0; k < n_; ++k) {
    const Complex y = mul(work[k] * scale, chirp_[k]);
    data[k] = inverse ? std::conj(y) : y;
  }
}

void FftPlan::execute_unscaled(std::span<Complex> data, Direction dir) const {
  if (data.size() != n_) throw InvalidArgument("FftPlan: input length does not match plan");
  if (use_bluestein_) {
    bluestein(data, dir);
    return;
  }
  const ComplexVector input(data.begin(), data.end());
  const std::size_t max_radix = factors_.empty() ? 1 : factors_.back();
  ComplexVector scratch(max_radix);
  mixed_radix(input.data(), data.data(), n_, 1, 0, dir, scratch.data());
}

ComplexVector FftPlan::execute(std::span<const Complex> x, Direction dir) const {
  ComplexVector out(x.begin(), x.end());
  execute_unscaled(out, dir);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n_));
  for (auto& c : out) c *= scale;
  return out;
}

ComplexVector unitary_dft(std::span<const Complex> x, Direction dir, TransformPath path) {
  if (x.empty()) throw InvalidArgument("unitary_dft: empty input");
  require_finite(x, "unitary_dft");
  if (path == TransformPath::dense) return unitary_dft_naive(x, dir);
  return cached_plan(x.size())->execute(x, dir);
}

ComplexVector unitary_dft_naive(std::span<const Complex> x, Direction dir) {
  const std::size_t n = x.size();
  if (n == 0) throw InvalidArgument("unitary_dft_naive: empty input");
  const double sign = dir == Direction::forward ? -1.0 : 1.0;
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  ComplexVector out(n);
  for (std::size_t k = 0; k < n; ++k) {
    Complex acc{};
    for (std::size_t j = 0; j < n; ++j) {
      const double angle = sign * 2.0 * std::numbers::pi * static_cast<double>((j * k) % n) /
                           static_cast<double>(n);
      acc += x[j] * Complex{std::cos(angle), std::sin(angle)};
    }
    out[k] = acc * scale;
  }
  return out;
}

RealVector circular_convolve(std::span<const double> row, std::span<const double> v,
                             TransformPath path) {
  require_convolvable(row, v);
  if (path == TransformPath::dense) return circular_convolve_dense(row, v);
  return CirculantOperator(RealVector(row.begin(), row.end())).apply(v);
}

RealVector circular_convolve_dense(std::span<const double> row, std::span<const double> v) {
  require_convolvable(row, v);
  const std::size_t n = row.size();
  RealVector out(n);
  const auto rows = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < rows; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    double acc = 0.0;
    for (std::size_t j = 0; j <= ui; ++j) acc += row[ui - j] * v[j];
    for (std::size_t j = ui + 1; j < n; ++j) acc += row[ui + n - j] * v[j];
    out[ui] = acc;
  }
  return out;
}

CirculantOperator::CirculantOperator(RealVector row, TransformPath path)
    : row_(std::move(row)), row_norm_(l2_norm(row_)), path_(path), plan_(cached_plan(row_.empty() ? 1 : row_.size())) {
  require_convolvable(row_, row_);
  spectrum_.assign(row_.begin(), row_.end());
  plan_->execute_unscaled(spectrum_, Direction::forward);
}

RealVector CirculantOperator::apply(std::span<const double> v) const {
  require_convolvable(row_, v);
  if (path_ == TransformPath::dense) return circular_convolve_dense(row_, v);
  ComplexVector work(v.begin(), v.end());
  plan_->execute_unscaled(work, Direction::forward);
  for (std::size_t k = 0; k < work.size(); ++k) work[k] = mul(work[k], spectrum_[k]);
  plan_->execute_unscaled(work, Direction::inverse);
  const double inv_n = 1.0 / static_cast<double>(work.size());
  for (auto& c : work) c *= inv_n;
  return take_real(work, row_norm_ * l2_norm(v));
}

}  // namespace longmem
