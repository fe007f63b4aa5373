#include "tmsd/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <thread>

#include "tmsd/block_matrix.hpp"
#include "tmsd/io.hpp"

namespace tmsd {

namespace {

const char* transform_name(TransformKind k) {
  switch (k) {
    case TransformKind::dft: return "dft";
    case TransformKind::dct: return "dct";
    default: return "custom";
  }
}

const char* sampling_name(SamplingKind k) {
  return k == SamplingKind::tubal ? "tubal" : "elementwise";
}

LinearTransform build_transform(const ExperimentConfig& cfg) {
  switch (cfg.transform) {
    case TransformKind::dft: return make_dft(cfg.n3);
    case TransformKind::dct: return make_dct(cfg.n3);
    default:
      throw UnsupportedTransform("experiments: transform must be dft or dct");
  }
}

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (n1 < 1 || n3 < 1 || r < 1) throw InvalidArg("config: dimensions >= 1");
  if (r >= n1) throw InvalidArg("config: r < n1 required");
  if (trials < 1) throw InvalidArg("config: trials >= 1");
  if (!(delta > 0) || !(delta < 1)) throw InvalidDelta("config: delta in (0,1)");
  for (double p : p_fa)
    if (!(p > 0) || !(p < 1)) throw InvalidP("config: pfa in (0,1)");
}

nlohmann::json ExperimentConfig::to_json() const {
  nlohmann::json j;
  j["transform"] = transform_name(transform);
  j["sampling"] = sampling_name(sampling);
  j["n1"] = n1;
  j["r"] = r;
  j["n3"] = n3;
  j["m_grid"] = m_grid;
  j["delta"] = delta;
  j["p_fa"] = p_fa;
  j["snr_grid_db"] = snr_grid_db;
  j["rate_grid"] = rate_grid;
  j["trials"] = trials;
  j["calib_trials"] = calib_trials;
  j["seed"] = seed;
  j["replacement"] = replacement;
  j["signal_class"] =
      signal_class == SignalClass::in_subspace ? "in_subspace" : "orthogonal";
  return j;
}

std::uint64_t ExperimentConfig::config_hash() const {
  std::string dump = to_json().dump();
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a
  for (unsigned char c : dump) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a,
                          std::uint64_t b) {
  std::uint64_t x = base ^ (a * 0x9E3779B97F4A7C15ull) ^
                    (b * 0xBF58476D1CE4E5B9ull + 0x94D049BB133111EBull);
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ull;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBull;
  x ^= x >> 31;
  return x;
}

void parallel_for(Index n, int threads, const std::function<void(Index)>& fn) {
  if (n <= 0) return;
  unsigned hw = std::thread::hardware_concurrency();
  unsigned t = threads > 0 ? static_cast<unsigned>(threads)
                           : (hw > 0 ? hw : 4u);
  t = std::min<unsigned>(t, static_cast<unsigned>(n));
  if (t <= 1) {
    for (Index i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<Index> next{0};
  std::vector<std::thread> pool;
  pool.reserve(t);
  for (unsigned w = 0; w < t; ++w)
    pool.emplace_back([&] {
      for (;;) {
        Index i = next.fetch_add(1);
        if (i >= n) break;
        fn(i);
      }
    });
  for (auto& th : pool) th.join();
}

Tensor3d uniform_tensor(Index n1, Index n2, Index n3, Pcg32& rng) {
  Tensor3d a(n1, n2, n3);
  for (Index i = 0; i < n1; ++i)
    for (Index j = 0; j < n2; ++j)
      for (Index k = 0; k < n3; ++k) a(i, j, k) = rng.next_double();
  return a;
}

Tensor3d random_combination(const LinearTransform& t, const Tensor3d& basis,
                            Pcg32& rng) {
  Tensor3d coeff = uniform_tensor(basis.n2(), 1, basis.n3(), rng);
  Tensor3d x = l_product(t, basis, coeff);
  double nrm = x.frobenius_norm();
  if (!(nrm > 0)) throw ZeroSignal("random_combination: zero signal");
  x *= 1.0 / nrm;
  return x;
}

namespace {

Tensor3d lateral_block(const Tensor3d& a, Index j0, Index cols) {
  Tensor3d out(a.n1(), cols, a.n3());
  for (Index k = 0; k < a.n3(); ++k)
    out.slice(k) = a.slice(k).middleCols(j0, cols);
  return out;
}

}  // namespace

SyntheticData gen_synthetic(const ExperimentConfig& cfg, std::uint64_t seed) {
  LinearTransform t = build_transform(cfg);
  Pcg32 rng(seed);
  Tensor3d a = uniform_tensor(cfg.n1, cfg.r, cfg.n3, rng);
  LSvdResult svd = l_svd(t, a);
  Tensor3d u = to_real(svd.u);
  Tensor3d u_r = lateral_block(u, 0, cfg.r);
  Tensor3d u_perp = lateral_block(u, cfg.r, cfg.n1 - cfg.r);
  Subspace s(t, u_r);
  Tensor3d sig_in = random_combination(t, u_r, rng);
  Tensor3d sig_out = random_combination(t, u_perp, rng);
  return SyntheticData{t, std::move(s), std::move(u_perp), std::move(sig_in),
                       std::move(sig_out)};
}

// ---------------------------------------------------------------------------
// estimator sweep
// ---------------------------------------------------------------------------

std::vector<SweepRecord> run_estimator_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.m_grid.empty()) throw InvalidArg("sweep: m grid is empty");
  SyntheticData data = gen_synthetic(cfg, cfg.seed);
  const Tensor3d& signal = cfg.signal_class == SignalClass::in_subspace
                               ? data.signal_in
                               : data.signal_out;
  const double full_res = residual_energy_full(data.subspace, signal);

  std::optional<EmbeddedSubspace> embedded;
  double mu_tensor = coherence_tensor(data.subspace);
  double mu_vec = mu_tensor;
  double cos_theta = 1.0;
  VectorSignalNorms vec_norms{0, 0};
  TubalSignalNorms tub_norms{0, 0};
  if (cfg.signal_class == SignalClass::orthogonal) {
    tub_norms = {signal.squaredNorm(), std::pow(linf_star_norm(signal), 2)};
  }
  if (cfg.sampling == SamplingKind::elementwise) {
    embedded = embed(data.subspace);
    if (cfg.transform != TransformKind::dft)
      mu_vec = coherence_vector(*embedded, cfg.n1, cfg.r);
    if (cfg.signal_class == SignalClass::orthogonal) {
      cos_theta = principal_angle_cos(*embedded, signal);
      VectorX<double> y = unfold_vec(signal);
      VectorX<double> y_perp = y - embedded->projection_matrix * y;
      vec_norms = {y_perp.squaredNorm(), std::pow(y_perp.cwiseAbs().maxCoeff(), 2)};
    }
  }

  std::vector<SweepRecord> records;
  for (std::size_t mi = 0; mi < cfg.m_grid.size(); ++mi) {
    const Index m = cfg.m_grid[mi];
    std::vector<double> vals(cfg.trials);
    std::vector<char> deficient(cfg.trials, 0);
    parallel_for(cfg.trials, cfg.threads, [&](Index trial) {
      SampleSet omega =
          draw(cfg.sampling, m, cfg.n1, cfg.n3, cfg.replacement,
               derive_seed(cfg.seed, 100 + mi, trial));
      if (cfg.sampling == SamplingKind::tubal) {
        TubalRestrictionOperator op(omega, data.subspace);
        vals[trial] = op.residual_energy_restricted(
            restrict_signal_tubal(omega, signal));
        deficient[trial] = !op.full_rank();
      } else {
        ElementwiseRestrictionOperator op(omega, *embedded);
        vals[trial] = op.residual_energy(op.sample_values(signal));
        deficient[trial] = !op.full_rank();
      }
    });
    SweepRecord rec;
    rec.m = m;
    rec.trials = cfg.trials;
    rec.min = *std::min_element(vals.begin(), vals.end());
    rec.max = *std::max_element(vals.begin(), vals.end());
    rec.mean = 0;
    for (double v : vals) rec.mean += v;
    rec.mean /= static_cast<double>(cfg.trials);
    for (char d : deficient) rec.rank_deficient += d;
    if (cfg.sampling == SamplingKind::tubal) {
      BoundReport b = bound_tubal(cfg.delta, m, cfg.n1, cfg.r, cfg.n3,
                                  mu_tensor, data.transform.energy_scale_sq(),
                                  tub_norms, full_res);
      rec.bound_lower = b.lower;
      rec.bound_upper = b.upper;
      rec.scale_reference = static_cast<double>(m) / cfg.n1 * full_res;
    } else {
      BoundReport b = bound_elementwise(cfg.delta, m, cfg.n1, cfg.r, cfg.n3,
                                        mu_vec, vec_norms, cos_theta, full_res);
      rec.bound_lower = b.lower;
      rec.bound_upper = b.upper;
      rec.scale_reference = cos_theta * cos_theta * static_cast<double>(m) /
                            (cfg.n1 * cfg.n3) * full_res;
    }
    records.push_back(rec);
  }
  return records;
}

// ---------------------------------------------------------------------------
// detector engines
// ---------------------------------------------------------------------------

namespace {

/// Cached machinery for one sample set: restriction operator, routing
/// information, spectrum basis when the Liu path is needed, and per-target
/// CFAR thresholds.
struct OmegaEngine {
  SampleSet omega;
  std::optional<TubalRestrictionOperator> tub;
  std::optional<ElementwiseRestrictionOperator> elem;
  bool zero_one = true;
  Index df = 0;
  SpectrumDecomposition spec;   // populated on the Liu path only
  std::optional<LiuApprox> h0;
  std::vector<double> thresholds;
  double noise_energy = 0;  // E ||noise_Omega||^2

  double statistic(const Tensor3d& observed_restricted) const {
    return tub ? tub->residual_energy_restricted(observed_restricted)
               : elem->residual_energy(elem->sample_values(observed_restricted));
  }
};

OmegaEngine build_engine(const ExperimentConfig& cfg, const SyntheticData& data,
                         const std::optional<EmbeddedSubspace>& embedded,
                         Index m, std::uint64_t omega_seed,
                         const std::vector<double>& p_list) {
  OmegaEngine eng;
  eng.omega = draw(cfg.sampling, m, cfg.n1, cfg.n3, cfg.replacement, omega_seed);
  if (cfg.sampling == SamplingKind::tubal) {
    eng.tub.emplace(eng.omega, data.subspace);
    if (!eng.tub->full_rank())
      throw RankDeficientSample("detector: restricted tubal basis lost rank");
    eng.noise_energy = static_cast<double>(m) * cfg.n3;
    if (cfg.transform == TransformKind::dft) {
      // bcirc of the restricted projection is an orthogonal projection:
      // exact noncentral chi-square with (m - r) n3 degrees of freedom
      eng.zero_one = true;
      eng.df = (m - cfg.r) * cfg.n3;
    } else {
      eng.spec = noise_spectrum_tubal(eng.omega, data.subspace);
      eng.zero_one = true;
      for (Index i = 0; i < eng.spec.sigmas_sq.size() && eng.zero_one; ++i) {
        double v = eng.spec.sigmas_sq(i);
        if (std::min(std::fabs(v), std::fabs(v - 1.0)) > 1e-6)
          eng.zero_one = false;
      }
      eng.df = eng.spec.rank;
      if (!eng.zero_one) eng.h0 = liu_approx(eng.spec);
    }
  } else {
    eng.elem.emplace(eng.omega, *embedded);
    if (!eng.elem->full_rank())
      throw RankDeficientSample("detector: restricted embedded basis lost rank");
    // the restricted embedded projection is orthogonal; 0/1 spectrum
    eng.zero_one = true;
    eng.df = eng.elem->sampled_count() - embedded->dimension;
    eng.noise_energy = static_cast<double>(eng.elem->sampled_count());
  }
  if (eng.df < 1)
    throw InvalidDegrees("detector: nonpositive degrees of freedom");
  for (double p : p_list) {
    eng.thresholds.push_back(
        eng.zero_one ? chi2_quantile(1.0 - p, static_cast<double>(eng.df))
                     : cfar_threshold(*eng.h0, p));
  }
  return eng;
}

/// Restricted clean signal for one engine (tubal: m x 1 x n3 tensor;
/// elementwise: zero-filled full tensor).
Tensor3d restrict_clean(const OmegaEngine& eng, const Tensor3d& signal) {
  return eng.tub ? restrict_signal_tubal(eng.omega, signal)
                 : restrict_signal_elementwise(eng.omega, signal);
}

/// Adds unit-variance Gaussian noise on the sampled support.
Tensor3d add_sampled_noise(const OmegaEngine& eng, const Tensor3d& restricted,
                           Pcg32& rng) {
  Tensor3d out = restricted;
  if (eng.tub) {
    for (Index i = 0; i < out.n1(); ++i)
      for (Index k = 0; k < out.n3(); ++k)
        out(i, 0, k) += rng.next_gaussian();
  } else {
    for (Index cell : eng.elem->cells()) {
      Index i = cell % out.n1();
      Index k = cell / out.n1();
      out(i, 0, k) += rng.next_gaussian();
    }
  }
  return out;
}

double snr_scale(const OmegaEngine& eng, double snr_db, double clean_energy) {
  if (!(clean_energy > 0)) return 0.0;
  double lin = std::pow(10.0, snr_db / 10.0);
  return std::sqrt(lin * eng.noise_energy / clean_energy);
}

/// Analytic P_D of one trial from the clean scaled restricted signal.
double analytic_pd(const OmegaEngine& eng, const Tensor3d& clean_scaled,
                   double threshold) {
  if (eng.zero_one) {
    double lambda_sq = eng.tub
        ? eng.tub->residual_energy_restricted(clean_scaled)
        : eng.elem->residual_energy(eng.elem->sample_values(clean_scaled));
    return 1.0 - noncentral_chi2_cdf(threshold, static_cast<double>(eng.df),
                                     lambda_sq);
  }
  VectorX<double> v = unfold_vec(clean_scaled);
  LiuApprox h1 = liu_approx(noncentral_params(eng.spec, v));
  return detection_probability(h1, threshold);
}

std::vector<OmegaEngine> build_pool(const ExperimentConfig& cfg,
                                    const SyntheticData& data,
                                    const std::optional<EmbeddedSubspace>& emb,
                                    Index m, Index pool_size,
                                    const std::vector<double>& p_list,
                                    std::uint64_t tag) {
  std::vector<OmegaEngine> pool;
  std::uint64_t attempt = 0;
  while (static_cast<Index>(pool.size()) < pool_size) {
    try {
      pool.push_back(build_engine(cfg, data, emb, m,
                                  derive_seed(cfg.seed, tag, attempt), p_list));
    } catch (const RankDeficientSample&) {
      // degenerate draw: resample (counted implicitly via attempt gap)
      if (attempt > static_cast<std::uint64_t>(pool_size) + 200)
        throw;
    }
    ++attempt;
  }
  return pool;
}

}  // namespace

std::vector<DetectorEvalRecord> run_detector_eval(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.m_grid.size() != 1)
    throw InvalidArg("detector eval: exactly one m required");
  if (cfg.snr_grid_db.empty() || cfg.p_fa.empty())
    throw InvalidArg("detector eval: snr and pfa grids must be nonempty");
  const Index m = cfg.m_grid[0];
  SyntheticData data = gen_synthetic(cfg, cfg.seed);
  std::optional<EmbeddedSubspace> embedded;
  if (cfg.sampling == SamplingKind::elementwise) embedded = embed(data.subspace);

  const Index pool_size = std::min<Index>(16, cfg.trials);
  std::vector<OmegaEngine> pool =
      build_pool(cfg, data, embedded, m, pool_size, cfg.p_fa, 7001);

  std::vector<DetectorEvalRecord> records;
  for (std::size_t si = 0; si < cfg.snr_grid_db.size(); ++si) {
    const double snr_db = cfg.snr_grid_db[si];
    for (std::size_t pi = 0; pi < cfg.p_fa.size(); ++pi) {
      const double p = cfg.p_fa[pi];
      std::vector<char> hits(cfg.trials, 0);
      std::vector<double> apd(cfg.trials, 0.0);
      parallel_for(cfg.trials, cfg.threads, [&](Index trial) {
        Pcg32 rng = Pcg32::for_trial(
            derive_seed(cfg.seed, 9000 + si * 97 + pi, trial), trial);
        const OmegaEngine& eng = pool[trial % pool.size()];
        Tensor3d signal = random_combination(data.transform, data.basis_perp,
                                             rng);
        Tensor3d clean = restrict_clean(eng, signal);
        double energy = eng.tub ? clean.squaredNorm()
                                : eng.elem->sample_values(clean).squaredNorm();
        double g = snr_scale(eng, snr_db, energy);
        Tensor3d clean_scaled = clean * g;
        Tensor3d observed = add_sampled_noise(eng, clean_scaled, rng);
        double stat = eng.statistic(observed);
        hits[trial] = stat > eng.thresholds[pi];
        apd[trial] = analytic_pd(eng, clean_scaled, eng.thresholds[pi]);
      });
      // H0 runs: in-subspace signal at the same scale, fresh noise
      std::vector<char> fa(cfg.calib_trials, 0);
      parallel_for(cfg.calib_trials, cfg.threads, [&](Index trial) {
        Pcg32 rng = Pcg32::for_trial(
            derive_seed(cfg.seed, 40000 + si * 97 + pi, trial), trial);
        const OmegaEngine& eng = pool[trial % pool.size()];
        Tensor3d signal = random_combination(data.transform,
                                             data.subspace.basis(), rng);
        Tensor3d clean = restrict_clean(eng, signal);
        double energy = eng.tub ? clean.squaredNorm()
                                : eng.elem->sample_values(clean).squaredNorm();
        double g = snr_scale(eng, snr_db, energy);
        Tensor3d observed = add_sampled_noise(eng, clean * g, rng);
        fa[trial] = eng.statistic(observed) > eng.thresholds[pi];
      });
      DetectorEvalRecord rec;
      rec.snr_db = snr_db;
      rec.p_fa_target = p;
      rec.m = m;
      rec.trials = cfg.trials;
      for (char h : hits) rec.empirical_p_d += h;
      rec.empirical_p_d /= static_cast<double>(cfg.trials);
      for (double v : apd) rec.analytic_p_d += v;
      rec.analytic_p_d /= static_cast<double>(cfg.trials);
      for (char h : fa) rec.empirical_p_fa += h;
      rec.empirical_p_fa /= static_cast<double>(cfg.calib_trials);
      records.push_back(rec);
    }
  }
  return records;
}

CalibrationResult run_cfar_calibration(const ExperimentConfig& cfg, Index m,
                                       double p, Index trials) {
  cfg.validate();
  if (!(p > 0) || !(p < 1)) throw InvalidP("calibration: p in (0,1)");
  SyntheticData data = gen_synthetic(cfg, cfg.seed);
  std::optional<EmbeddedSubspace> embedded;
  if (cfg.sampling == SamplingKind::elementwise) embedded = embed(data.subspace);
  const Index pool_size = std::min<Index>(16, trials);
  std::vector<OmegaEngine> pool =
      build_pool(cfg, data, embedded, m, pool_size, {p}, 7103);
  std::vector<char> fa(trials, 0);
  parallel_for(trials, cfg.threads, [&](Index trial) {
    Pcg32 rng = Pcg32::for_trial(derive_seed(cfg.seed, 50000, trial), trial);
    const OmegaEngine& eng = pool[trial % pool.size()];
    Tensor3d signal =
        random_combination(data.transform, data.subspace.basis(), rng);
    Tensor3d clean = restrict_clean(eng, signal);
    double energy = eng.tub ? clean.squaredNorm()
                            : eng.elem->sample_values(clean).squaredNorm();
    double g = snr_scale(eng, 0.0, energy);
    Tensor3d observed = add_sampled_noise(eng, clean * g, rng);
    fa[trial] = eng.statistic(observed) > eng.thresholds[0];
  });
  CalibrationResult res;
  res.p_target = p;
  res.trials = trials;
  res.m = m;
  for (char h : fa) res.empirical += h;
  res.empirical /= static_cast<double>(trials);
  return res;
}

std::vector<RateRecord> run_rate_comparison(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.rate_grid.empty()) throw InvalidArg("rates: rate grid is empty");
  const double p = cfg.p_fa.front();
  const double snr_db = cfg.snr_grid_db.size() == 1 ? cfg.snr_grid_db[0] : 0.0;

  struct Method {
    TransformKind transform;
    SamplingKind sampling;
    const char* name;
  };
  const Method methods[] = {
      {TransformKind::dft, SamplingKind::tubal, "dft-tubal"},
      {TransformKind::dft, SamplingKind::elementwise, "dft-elementwise"},
      {TransformKind::dct, SamplingKind::tubal, "dct-tubal"},
      {TransformKind::dct, SamplingKind::elementwise, "dct-elementwise"},
  };

  std::vector<RateRecord> records;
  for (const Method& method : methods) {
    ExperimentConfig mc = cfg;
    mc.transform = method.transform;
    mc.sampling = method.sampling;
    SyntheticData data = gen_synthetic(mc, mc.seed);
    std::optional<EmbeddedSubspace> embedded;
    if (mc.sampling == SamplingKind::elementwise) embedded = embed(data.subspace);
    for (std::size_t ri = 0; ri < cfg.rate_grid.size(); ++ri) {
      const double rate = cfg.rate_grid[ri];
      const Index universe =
          mc.sampling == SamplingKind::tubal ? mc.n1 : mc.n1 * mc.n3;
      const Index m = std::min<Index>(
          universe, static_cast<Index>(std::llround(rate * universe)));
      RateRecord rec;
      rec.method = method.name;
      rec.rate = rate;
      rec.m = m;
      rec.trials = cfg.trials;
      const Index min_m =
          mc.sampling == SamplingKind::tubal ? mc.r + 1 : mc.r * mc.n3 + 1;
      if (m < min_m) {
        rec.empirical_p_d = std::numeric_limits<double>::quiet_NaN();
        rec.errors = cfg.trials;
        records.push_back(rec);
        continue;
      }
      const Index pool_size = std::min<Index>(4, cfg.trials);
      std::vector<OmegaEngine> pool =
          build_pool(mc, data, embedded, m, pool_size, {p}, 7200 + ri);
      std::vector<char> hits(cfg.trials, 0);
      parallel_for(cfg.trials, cfg.threads, [&](Index trial) {
        Pcg32 rng = Pcg32::for_trial(
            derive_seed(mc.seed, 60000 + ri * 7, trial), trial);
        const OmegaEngine& eng = pool[trial % pool.size()];
        Tensor3d signal =
            random_combination(data.transform, data.basis_perp, rng);
        Tensor3d clean = restrict_clean(eng, signal);
        double energy = eng.tub ? clean.squaredNorm()
                                : eng.elem->sample_values(clean).squaredNorm();
        double g = snr_scale(eng, snr_db, energy);
        Tensor3d observed = add_sampled_noise(eng, clean * g, rng);
        hits[trial] = eng.statistic(observed) > eng.thresholds[0];
      });
      for (char h : hits) rec.empirical_p_d += h;
      rec.empirical_p_d /= static_cast<double>(cfg.trials);
      records.push_back(rec);
    }
  }
  return records;
}

// ---------------------------------------------------------------------------
// output
// ---------------------------------------------------------------------------

namespace {

void write_sidecar(const std::string& path, const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["config"] = cfg.to_json();
  j["config_hash"] = cfg.config_hash();
  write_json(path + ".json", j);
}

}  // namespace

void write_json(const std::string& path, const nlohmann::json& payload) {
  std::ofstream out(path);
  if (!out) throw IoError("write_json: cannot open " + path);
  out << payload.dump(2) << "\n";
}

void write_csv(const std::string& path, const std::vector<SweepRecord>& rows,
               const ExperimentConfig& cfg) {
  std::ofstream out(path);
  if (!out) throw IoError("write_csv: cannot open " + path);
  out << "m,min,max,mean,bound_lower,bound_upper,scale_reference,"
         "rank_deficient,trials,config_hash,seed\n";
  for (const auto& r : rows)
    out << r.m << ',' << fmt(r.min) << ',' << fmt(r.max) << ',' << fmt(r.mean)
        << ',' << fmt(r.bound_lower) << ',' << fmt(r.bound_upper) << ','
        << fmt(r.scale_reference) << ',' << r.rank_deficient << ',' << r.trials
        << ',' << cfg.config_hash() << ',' << cfg.seed << '\n';
  write_sidecar(path, cfg);
}

void write_csv(const std::string& path,
               const std::vector<DetectorEvalRecord>& rows,
               const ExperimentConfig& cfg) {
  std::ofstream out(path);
  if (!out) throw IoError("write_csv: cannot open " + path);
  out << "snr_db,p_fa_target,m,empirical_p_d,analytic_p_d,empirical_p_fa,"
         "trials,config_hash,seed\n";
  for (const auto& r : rows)
    out << fmt(r.snr_db) << ',' << fmt(r.p_fa_target) << ',' << r.m << ','
        << fmt(r.empirical_p_d) << ',' << fmt(r.analytic_p_d) << ','
        << fmt(r.empirical_p_fa) << ',' << r.trials << ','
        << cfg.config_hash() << ',' << cfg.seed << '\n';
  write_sidecar(path, cfg);
}

void write_csv(const std::string& path, const std::vector<RateRecord>& rows,
               const ExperimentConfig& cfg) {
  std::ofstream out(path);
  if (!out) throw IoError("write_csv: cannot open " + path);
  out << "method,rate,m,empirical_p_d,errors,trials,config_hash,seed\n";
  for (const auto& r : rows)
    out << r.method << ',' << fmt(r.rate) << ',' << r.m << ','
        << fmt(r.empirical_p_d) << ',' << r.errors << ',' << r.trials << ','
        << cfg.config_hash() << ',' << cfg.seed << '\n';
  write_sidecar(path, cfg);
}

}  // namespace tmsd
