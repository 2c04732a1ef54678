#include "longmem/montecarlo.hpp"

#include <cmath>
#include <exception>
#include <string>

#include "longmem/errors.hpp"
#include "longmem/sampler.hpp"


namespace longmem {
namespace {

void require_study_args(std::size_t replicates, std::size_t workers) {
  if (replicates < 2) throw InvalidArgument("run_study: replicates must be >= 2");
  if (workers < 1) throw InvalidArgument("run_study: workers must be >= 1");
}

struct MeanCv {
  double mean;
  double cv;
};

template <typename Get>
MeanCv mean_cv(const std::vector<SampleStats>& stats, Get get) {
  const auto count = static_cast<double>(stats.size());
  double mean = 0.0;
  for (const auto& s : stats) mean += get(s);
  mean /= count;
  double ss = 0.0;
  for (const auto& s : stats) ss += (get(s) - mean) * (get(s) - mean);
  return {mean, std::sqrt(ss / (count - 1.0)) / mean};
}

MonteCarloReport summarize(const SpectralModel& model, std::uint64_t seed, std::vector<SampleStats> stats) {
  MonteCarloReport r;
  r.beta = model.beta();
  r.n = model.grid().n;
  r.replicates = stats.size();
  r.seed = seed;
  r.eigen = eigen_report(model);

  const auto d = mean_cv(stats, [](const SampleStats& s) { return s.d_meas; });
  const auto a = mean_cv(stats, [](const SampleStats& s) { return s.alpha_meas; });
  const auto v = mean_cv(stats, [](const SampleStats& s) { return s.variance; });
  r.mean_d = d.mean;
  r.cv_d = d.cv;
  r.mean_alpha = a.mean;
  r.cv_alpha = a.cv;
  r.mean_var = v.mean;
  r.cv_var = v.cv;
  r.per_replicate = std::move(stats);
  return r;
}

SampleStats measure_replicate(const CirculantOperator& op, std::uint64_t seed, std::size_t index) {
  RngStream rng(seed, index);
  const SeriesSample sample = generate(op, rng);
  return sample_stats(sample.series);
}

int thread_count(std::size_t workers) { return static_cast<int>(workers); }

}  // namespace

MonteCarloReport run_study(const SpectralModel& model, std::size_t replicates, std::uint64_t seed,
                           std::size_t workers) {
  require_study_args(replicates, workers);
  const CirculantOperator op(model.first_row(), model.path());

  std::vector<SampleStats> stats(replicates);
  std::vector<std::string> failures(replicates);
  std::vector<char> failed(replicates, 0);
  const auto count = static_cast<std::ptrdiff_t>(replicates);

#pragma omp parallel for schedule(static) num_threads(thread_count(workers))
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    try {
      stats[idx] = measure_replicate(op, seed, idx);
    } catch (const std::exception& e) {
      failed[idx] = 1;
      failures[idx] = e.what();
    }
  }

  for (std::size_t i = 0; i < replicates; ++i) {
    if (failed[i]) throw StudyAbortedError(i, failures[i]);
  }
  return summarize(model, seed, std::move(stats));
}

MonteCarloReport run_study(double beta, std::size_t n, std::size_t replicates, std::uint64_t seed,
                           std::size_t workers, TransformPath path) {
  require_study_args(replicates, workers);
  return run_study(build_model(beta, n, path), replicates, seed, workers);
}

MonteCarloReport run_study_serial(const SpectralModel& model, std::size_t replicates, std::uint64_t seed) {
  require_study_args(replicates, 1);
  const CirculantOperator op(model.first_row(), model.path());
  std::vector<SampleStats> stats;
  stats.reserve(replicates);
  for (std::size_t i = 0; i < replicates; ++i) {
    try {
      stats.push_back(measure_replicate(op, seed, i));
    } catch (const std::exception& e) {
      throw StudyAbortedError(i, e.what());
    }
  }
  return summarize(model, seed, std::move(stats));
}

Histogram histogram_study(const SpectralModel& model, std::size_t replicates, std::size_t bin_count,
                          std::uint64_t seed, std::size_t workers) {
  if (replicates < 1) throw InvalidArgument("histogram_study: no replicates requested");
  if (workers < 1) throw InvalidArgument("histogram_study: workers must be >= 1");
  const CirculantOperator op(model.first_row(), model.path());
  Histogram total(bin_count);
  std::vector<char> failed(replicates, 0);
  std::vector<std::string> failures(replicates);
  const auto count = static_cast<std::ptrdiff_t>(replicates);

#pragma omp parallel num_threads(thread_count(workers))
  {
    Histogram local(bin_count);
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
      const auto idx = static_cast<std::size_t>(i);
      try {
        RngStream rng(seed, idx);
        local.add(generate(op, rng).standardized);
      } catch (const std::exception& e) {
        failed[idx] = 1;
        failures[idx] = e.what();
      }
    }
    // Integer counts: merge order does not affect the result.
#pragma omp critical(longmem_histogram_merge)
    total.merge(local);
  }

  for (std::size_t i = 0; i < replicates; ++i) {
    if (failed[i]) throw StudyAbortedError(i, failures[i]);
  }
  return total;
}

Histogram histogram_study_serial(const SpectralModel& model, std::size_t replicates, std::size_t bin_count,
                                 std::uint64_t seed) {
  if (replicates < 1) throw InvalidArgument("histogram_study: no replicates requested");
  const CirculantOperator op(model.first_row(), model.path());
  std::vector<RealVector> vectors;
  vectors.reserve(replicates);
  for (std::size_t i = 0; i < replicates; ++i) {
    RngStream rng(seed, i);
    vectors.push_back(generate(op, rng).standardized);
  }
  return accumulate_histogram(vectors, bin_count);
}

}  // namespace longmem
