#ifndef TMSD_EXPERIMENTS_HPP
#define TMSD_EXPERIMENTS_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tmsd/detector.hpp"
#include "tmsd/estimator.hpp"
#include "tmsd/rng.hpp"
#include "tmsd/sampling.hpp"
#include "tmsd/subspace.hpp"

namespace tmsd {

enum class SignalClass { in_subspace, orthogonal };

struct ExperimentConfig {
  TransformKind transform = TransformKind::dft;
  SamplingKind sampling = SamplingKind::tubal;
  Index n1 = 50;
  Index r = 10;
  Index n3 = 50;
  std::vector<Index> m_grid;
  double delta = 0.05;
  std::vector<double> p_fa = {1e-2};
  std::vector<double> snr_grid_db = {-12, -9, -6, -3, 0, 3, 6, 9, 12};
  std::vector<double> rate_grid = {0.22, 0.24, 0.3, 0.4, 0.6, 0.8, 1.0};
  Index trials = 100;
  Index calib_trials = 2000;
  std::uint64_t seed = 1;
  bool replacement = false;
  SignalClass signal_class = SignalClass::orthogonal;
  int threads = 0;  // 0 = hardware concurrency

  void validate() const;
  nlohmann::json to_json() const;
  std::uint64_t config_hash() const;
};

/// Synthetic protocol: A ~ U(0,1)^{n1 x r x n3}, L-SVD, U split into the
/// leading r columns (spanning S) and the trailing n1-r columns (spanning
/// S-perp); signals are U-coefficient products normalized to unit energy.
struct SyntheticData {
  LinearTransform transform;
  Subspace subspace;       // basis = U_r
  Tensor3d basis_perp;     // remaining n1-r columns of U
  Tensor3d signal_in;      // in S, ||.||_F^2 = 1
  Tensor3d signal_out;     // in S-perp, ||.||_F^2 = 1
};

SyntheticData gen_synthetic(const ExperimentConfig& cfg, std::uint64_t seed);

/// Fresh unit-energy signal from the given lateral-slice basis and uniform
/// U(0,1) coefficient tubes.
Tensor3d random_combination(const LinearTransform& t, const Tensor3d& basis,
                            Pcg32& rng);

Tensor3d uniform_tensor(Index n1, Index n2, Index n3, Pcg32& rng);

struct SweepRecord {
  Index m = 0;
  double min = 0;
  double max = 0;
  double mean = 0;
  double bound_lower = 0;
  double bound_upper = 0;
  double scale_reference = 0;
  Index rank_deficient = 0;
  Index trials = 0;
};

std::vector<SweepRecord> run_estimator_sweep(const ExperimentConfig& cfg);

struct DetectorEvalRecord {
  double snr_db = 0;
  double p_fa_target = 0;
  Index m = 0;
  double empirical_p_d = 0;
  double analytic_p_d = 0;
  double empirical_p_fa = 0;
  Index trials = 0;
};

std::vector<DetectorEvalRecord> run_detector_eval(const ExperimentConfig& cfg);

struct RateRecord {
  std::string method;
  double rate = 0;
  Index m = 0;
  double empirical_p_d = 0;
  Index errors = 0;
  Index trials = 0;
};

std::vector<RateRecord> run_rate_comparison(const ExperimentConfig& cfg);

/// Empirical false-alarm rate of the CFAR detector over H0 trials, with
/// sample sets drawn from a small pool whose spectra are cached.
struct CalibrationResult {
  double p_target = 0;
  double empirical = 0;
  Index trials = 0;
  Index m = 0;
};

CalibrationResult run_cfar_calibration(const ExperimentConfig& cfg, Index m,
                                       double p, Index trials);

// CSV writers: one header row, fixed column order (documented in README).
void write_csv(const std::string& path, const std::vector<SweepRecord>& rows,
               const ExperimentConfig& cfg);
void write_csv(const std::string& path,
               const std::vector<DetectorEvalRecord>& rows,
               const ExperimentConfig& cfg);
void write_csv(const std::string& path, const std::vector<RateRecord>& rows,
               const ExperimentConfig& cfg);
void write_json(const std::string& path, const nlohmann::json& payload);

/// Deterministic sub-seed for a named stream (sweep point, trial, ...).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b);

/// Runs fn(i) for i in [0, n) across threads, results independent of the
/// worker count (callers write into preallocated slots).
void parallel_for(Index n, int threads, const std::function<void(Index)>& fn);

}  // namespace tmsd

#endif  // TMSD_EXPERIMENTS_HPP
