#include "longmem/spectral_model.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <string>

#include "longmem/errors.hpp"

namespace longmem {

FrequencyGrid build_grid(std::size_t n) {
  if (n < 2) throw InvalidArgument("build_grid: n must be >= 2, got " + std::to_string(n));
  // Negative side has floor(n/2) points: -1/2 + k/n for k < floor(n/2).
  const std::size_t half = n / 2;
  const double step = 1.0 / static_cast<double>(n);

  FrequencyGrid grid;
  grid.n = n;
  grid.rn = 2 * half + 1;
  grid.frequencies.reserve(grid.rn);
  for (std::size_t k = 0; k < half; ++k) grid.frequencies.push_back(-0.5 + static_cast<double>(k) * step);
  grid.frequencies.push_back(1.0 / (2.0 * static_cast<double>(n)));
  for (std::size_t k = half; k-- > 0;) grid.frequencies.push_back(-grid.frequencies[k]);
  return grid;
}

SpectralModel build_model(double beta, std::size_t n, TransformPath path) {
  if (!std::isfinite(beta) || beta < kMinBeta || beta > kMaxBeta) {
    throw InvalidArgument("build_model: beta must lie in [0, 10], got " + std::to_string(beta));
  }
  SpectralModel model;
  model.beta_ = beta;
  model.path_ = path;
  model.grid_ = build_grid(n);
  const std::size_t rn = model.grid_.rn;
  const double root_rn = std::sqrt(static_cast<double>(rn));

  model.density_.resize(rn);
  std::transform(model.grid_.frequencies.begin(), model.grid_.frequencies.end(), model.density_.begin(),
                 [beta](double f) { return std::pow(std::abs(f), -beta / 2.0); });

  const ComplexVector density_c(model.density_.begin(), model.density_.end());
  const ComplexVector time_domain = unitary_dft(density_c, Direction::inverse, path);
  model.first_row_.resize(rn);
  for (std::size_t j = 0; j < rn; ++j) model.first_row_[j] = std::abs(time_domain[j]) / root_rn;
  // The density is even about its centre, so entries j and rn-j agree up to
  // round-off; average them so the operator is exactly symmetric.
  for (std::size_t j = 1; j <= rn / 2; ++j) {
    const double mean = 0.5 * (model.first_row_[j] + model.first_row_[rn - j]);
    model.first_row_[j] = mean;
    model.first_row_[rn - j] = mean;
  }

  // Circulant eigenvalues are the unnormalized DFT of the first row.
  const ComplexVector row_c(model.first_row_.begin(), model.first_row_.end());
  const ComplexVector spectrum = unitary_dft(row_c, Direction::forward, path);

  RealVector eig(rn);
  double largest = 0.0;
  double worst_residue = 0.0;
  for (std::size_t k = 0; k < rn; ++k) {
    eig[k] = spectrum[k].real() * root_rn;
    largest = std::max(largest, eig[k]);
    worst_residue = std::max(worst_residue, std::abs(spectrum[k].imag()) * root_rn);
  }
  if (!(largest > 0.0) || worst_residue > 1e-8 * largest) {
    throw ModelConstructionError("build_model: circulant spectrum is not real (residue " +
                                 std::to_string(worst_residue) + ", lambda_max " + std::to_string(largest) + ")");
  }
  std::sort(eig.begin(), eig.end(), std::greater<>());
  if (!(eig.back() > 0.0)) {
    throw ModelConstructionError("build_model: operator is not positive definite (lambda_min = " +
                                 std::to_string(eig.back()) + ")");
  }
  model.eigenvalues_ = std::move(eig);
  return model;
}

namespace {

double least_squares_slope(std::span<const double> x, std::span<const double> y) {
  const double count = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / count;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / count;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

}  // namespace

EigenReport eigen_report(const SpectralModel& model) {
  const RealVector& lambda = model.eigenvalues();
  const std::size_t rn = lambda.size();
  const double lead = lambda.front();
  const double trace = std::accumulate(lambda.begin(), lambda.end(), 0.0);

  EigenReport r;
  r.d_raw = trace / lead;
  r.E = trace / (std::sqrt(2.0) * lead) + 1.0;
  r.d_est = r.E - (r.E - 3.0) / kDimensionShrink;
  r.alpha_est = (r.d_est - 1.0) / 2.0;

  double tail_energy = 0.0;
  for (std::size_t k = 1; k < rn; ++k) tail_energy += lambda[k] * lambda[k];
  r.var_est = tail_energy / static_cast<double>(rn - 1);
  r.kappa = lead / lambda.back();

  // Ranks 2..ceil(rn/2); needs at least two points (rn >= 5).
  const std::size_t last_rank = (rn + 1) / 2;
  if (last_rank >= 3) {
    RealVector log_rank;
    RealVector log_lambda;
    for (std::size_t rank = 2; rank <= last_rank; ++rank) {
      log_rank.push_back(std::log(static_cast<double>(rank)));
      log_lambda.push_back(std::log(lambda[rank - 1]));
    }
    r.slope_fit = least_squares_slope(log_rank, log_lambda);
  } else {
    r.slope_fit = std::numeric_limits<double>::quiet_NaN();
  }
  return r;
}

RealMatrix dense_circulant(std::span<const double> first_row) {
  const std::size_t n = first_row.size();
  if (n == 0) throw InvalidArgument("dense_circulant: empty row");
  if (n % 2 == 0) throw UnsupportedLength("dense_circulant: even length " + std::to_string(n));
  if (n > kDenseOperatorLimit) {
    throw ResourceLimitError("dense_circulant: length " + std::to_string(n) + " exceeds limit " +
                             std::to_string(kDenseOperatorLimit));
  }
  RealMatrix m{n, n, RealVector(n * n)};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m(i, j) = first_row[(j + n - i) % n];
  }
  return m;
}

RealMatrix dense_operator(const SpectralModel& model) { return dense_circulant(model.first_row()); }

}  // namespace longmem
