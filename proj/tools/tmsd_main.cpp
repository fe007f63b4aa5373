#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "tmsd/experiments.hpp"
#include "tmsd/io.hpp"

namespace {

using namespace tmsd;

std::vector<Index> parse_grid(const std::string& s) {
  // "a:b:step" range (inclusive) or "v1,v2,..." list
  std::vector<Index> out;
  if (s.find(':') != std::string::npos) {
    long a = 0, b = 0, step = 1;
    if (std::sscanf(s.c_str(), "%ld:%ld:%ld", &a, &b, &step) < 2 || step < 1)
      throw InvalidArg("grid: expected a:b:step");
    for (long v = a; v <= b; v += step) out.push_back(v);
  } else {
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stol(item));
  }
  if (out.empty()) throw InvalidArg("grid: empty");
  return out;
}

std::vector<double> parse_dgrid(const std::string& s) {
  std::vector<double> out;
  if (s.find(':') != std::string::npos) {
    double a = 0, b = 0, step = 1;
    if (std::sscanf(s.c_str(), "%lf:%lf:%lf", &a, &b, &step) < 2 || step <= 0)
      throw InvalidArg("grid: expected a:b:step");
    for (double v = a; v <= b + 1e-12; v += step) out.push_back(v);
  } else {
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  }
  if (out.empty()) throw InvalidArg("grid: empty");
  return out;
}

struct CliOptions {
  ExperimentConfig cfg;
  std::string transform = "dft";
  std::string sampling = "tubal";
  std::string signal_class = "orthogonal";
  std::string replacement = "false";
  std::string m_grid;
  std::string snr_grid;
  std::string rate_grid;
  long m = -1;
  std::vector<double> pfa;
  std::string out = "out.csv";
  std::string format = "csv";
};

void add_common(CLI::App* sub, CliOptions& o) {
  sub->add_option("--transform", o.transform)->check(CLI::IsMember({"dft", "dct"}));
  sub->add_option("--sampling", o.sampling)
      ->check(CLI::IsMember({"tubal", "elementwise"}));
  sub->add_option("--n1", o.cfg.n1);
  sub->add_option("--r", o.cfg.r);
  sub->add_option("--n3", o.cfg.n3);
  sub->add_option("--m", o.m);
  sub->add_option("--m-grid", o.m_grid);
  sub->add_option("--delta", o.cfg.delta);
  sub->add_option("--pfa", o.pfa);
  sub->add_option("--snr-grid", o.snr_grid);
  sub->add_option("--rate-grid", o.rate_grid);
  sub->add_option("--trials", o.cfg.trials);
  sub->add_option("--calib-trials", o.cfg.calib_trials);
  sub->add_option("--seed", o.cfg.seed);
  sub->add_option("--threads", o.cfg.threads);
  sub->add_option("--replacement", o.replacement)
      ->check(CLI::IsMember({"true", "false"}));
  sub->add_option("--signal-class", o.signal_class)
      ->check(CLI::IsMember({"in_subspace", "orthogonal"}));
  sub->add_option("--out", o.out);
  sub->add_option("--format", o.format)->check(CLI::IsMember({"csv", "json"}));
}

ExperimentConfig finalize(CliOptions& o) {
  ExperimentConfig cfg = o.cfg;
  cfg.transform = o.transform == "dft" ? TransformKind::dft : TransformKind::dct;
  cfg.sampling =
      o.sampling == "tubal" ? SamplingKind::tubal : SamplingKind::elementwise;
  cfg.signal_class = o.signal_class == "in_subspace" ? SignalClass::in_subspace
                                                     : SignalClass::orthogonal;
  cfg.replacement = o.replacement == "true";
  if (!o.m_grid.empty())
    cfg.m_grid = parse_grid(o.m_grid);
  else if (o.m > 0)
    cfg.m_grid = {static_cast<Index>(o.m)};
  if (!o.pfa.empty()) cfg.p_fa = o.pfa;
  if (!o.snr_grid.empty()) cfg.snr_grid_db = parse_dgrid(o.snr_grid);
  if (!o.rate_grid.empty()) cfg.rate_grid = parse_dgrid(o.rate_grid);
  cfg.validate();
  return cfg;
}

template <typename Rows>
void emit(const Rows& rows, const ExperimentConfig& cfg, const CliOptions& o,
          nlohmann::json (*to_json)(const Rows&)) {
  if (o.format == "json") {
    nlohmann::json j;
    j["config"] = cfg.to_json();
    j["config_hash"] = cfg.config_hash();
    j["rows"] = to_json(rows);
    write_json(o.out, j);
  } else {
    write_csv(o.out, rows, cfg);
  }
  std::cout << "wrote " << o.out << "\n";
}

nlohmann::json sweep_rows_json(const std::vector<SweepRecord>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows)
    arr.push_back({{"m", r.m},
                   {"min", r.min},
                   {"max", r.max},
                   {"mean", r.mean},
                   {"bound_lower", r.bound_lower},
                   {"bound_upper", r.bound_upper},
                   {"scale_reference", r.scale_reference},
                   {"rank_deficient", r.rank_deficient},
                   {"trials", r.trials}});
  return arr;
}

nlohmann::json roc_rows_json(const std::vector<DetectorEvalRecord>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows)
    arr.push_back({{"snr_db", r.snr_db},
                   {"p_fa_target", r.p_fa_target},
                   {"m", r.m},
                   {"empirical_p_d", r.empirical_p_d},
                   {"analytic_p_d", r.analytic_p_d},
                   {"empirical_p_fa", r.empirical_p_fa},
                   {"trials", r.trials}});
  return arr;
}

nlohmann::json rate_rows_json(const std::vector<RateRecord>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows)
    arr.push_back({{"method", r.method},
                   {"rate", r.rate},
                   {"m", r.m},
                   {"empirical_p_d", r.empirical_p_d},
                   {"errors", r.errors},
                   {"trials", r.trials}});
  return arr;
}

int run_gen(CliOptions& o, const std::string& prefix) {
  ExperimentConfig cfg = finalize(o);
  SyntheticData data = gen_synthetic(cfg, cfg.seed);
  save_tensor(prefix + "_basis.csv", data.subspace.basis());
  save_tensor(prefix + "_basis_perp.csv", data.basis_perp);
  save_tensor(prefix + "_signal_in.csv", data.signal_in);
  save_tensor(prefix + "_signal_out.csv", data.signal_out);
  nlohmann::json j;
  j["config"] = cfg.to_json();
  j["config_hash"] = cfg.config_hash();
  j["coherence_tensor"] = coherence_tensor(data.subspace);
  j["files"] = {prefix + "_basis.csv", prefix + "_basis_perp.csv",
                prefix + "_signal_in.csv", prefix + "_signal_out.csv"};
  write_json(prefix + "_meta.json", j);
  std::cout << "wrote " << prefix << "_{basis,basis_perp,signal_in,signal_out}"
            << ".csv and " << prefix << "_meta.json\n";
  return 0;
}

int run_detect(CliOptions& o, const std::string& basis_path,
               const std::string& signal_path, bool noisy) {
  ExperimentConfig cfg = finalize(o);
  if (cfg.m_grid.size() != 1)
    throw InvalidArg("detect: exactly one --m required");
  LinearTransform t = cfg.transform == TransformKind::dft ? make_dft(cfg.n3)
                                                          : make_dct(cfg.n3);
  Tensor3d basis = load_tensor(basis_path);
  Tensor3d signal = load_tensor(signal_path);
  Subspace s(t, basis);
  SampleSet omega = draw(cfg.sampling, cfg.m_grid[0], signal.n1(), signal.n3(),
                         cfg.replacement, cfg.seed);
  DetectorReport rep;
  if (!noisy) {
    double res;
    if (cfg.sampling == SamplingKind::tubal) {
      res = residual_energy_tubal(omega, s, signal);
    } else {
      EmbeddedSubspace e = embed(s);
      res = residual_energy_elementwise(omega, e, signal);
    }
    rep = detect_noiseless(res, 1e-9 * signal.squaredNorm());
  } else {
    Pcg32 rng(cfg.seed + 1);
    if (cfg.sampling == SamplingKind::tubal) {
      Tensor3d w = restrict_signal_tubal(omega, signal);
      for (Index i = 0; i < w.n1(); ++i)
        for (Index k = 0; k < w.n3(); ++k) w(i, 0, k) += rng.next_gaussian();
      rep = detect_noisy(omega, s, w, cfg.p_fa.front());
    } else {
      EmbeddedSubspace e = embed(s);
      Tensor3d w = restrict_signal_elementwise(omega, signal);
      for (Index cell : distinct_cells(omega)) {
        Index i = cell % w.n1();
        Index k = cell / w.n1();
        w(i, 0, k) += rng.next_gaussian();
      }
      rep = detect_noisy(omega, e, w, cfg.p_fa.front());
    }
  }
  nlohmann::json j;
  j["statistic"] = rep.statistic;
  j["threshold"] = rep.threshold;
  j["decision"] = rep.decision == Decision::H1 ? "H1" : "H0";
  j["p_fa_target"] = rep.p_fa_target;
  j["mode"] = rep.mode == DetectorMode::noiseless ? "noiseless"
              : rep.mode == DetectorMode::noisy_projection ? "noisy_projection"
                                                           : "noisy_general";
  if (rep.p_detect) j["p_detect"] = *rep.p_detect;
  j["omega"] = sample_set_to_json(omega, cfg.seed);
  if (o.out == "out.csv") {
    std::cout << j.dump(2) << "\n";
  } else {
    write_json(o.out, j);
    std::cout << "wrote " << o.out << "\n";
  }
  return rep.decision == Decision::H1 ? 0 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"transform-based tensor matched subspace detection harness"};
  app.require_subcommand(1);

  CliOptions o;
  std::string gen_prefix = "synthetic";
  std::string basis_path, signal_path;
  bool noisy = false;

  CLI::App* gen = app.add_subcommand("gen", "emit synthetic subspace+signals");
  add_common(gen, o);
  gen->add_option("--prefix", gen_prefix, "output file prefix");

  CLI::App* sweep =
      app.add_subcommand("sweep", "estimator concentration sweep over m");
  add_common(sweep, o);

  CLI::App* detect =
      app.add_subcommand("detect", "single detection on provided files");
  add_common(detect, o);
  detect->add_option("--basis", basis_path, "subspace basis tensor file")
      ->required();
  detect->add_option("--signal", signal_path, "signal tensor file")->required();
  detect->add_flag("--noisy", noisy, "add unit-variance Gaussian noise");

  CLI::App* roc = app.add_subcommand("roc", "P_D versus SNR grid");
  add_common(roc, o);

  CLI::App* rates = app.add_subcommand("rates", "method comparison over rates");
  add_common(rates, o);

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return run_gen(o, gen_prefix);
    if (sweep->parsed()) {
      ExperimentConfig cfg = finalize(o);
      auto rows = run_estimator_sweep(cfg);
      emit(rows, cfg, o, &sweep_rows_json);
      return 0;
    }
    if (detect->parsed()) return run_detect(o, basis_path, signal_path, noisy);
    if (roc->parsed()) {
      ExperimentConfig cfg = finalize(o);
      auto rows = run_detector_eval(cfg);
      emit(rows, cfg, o, &roc_rows_json);
      return 0;
    }
    if (rates->parsed()) {
      ExperimentConfig cfg = finalize(o);
      auto rows = run_rate_comparison(cfg);
      emit(rows, cfg, o, &rate_rows_json);
      return 0;
    }
  } catch (const InvalidArg& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const InvalidDelta& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const InvalidP& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const TooManySamples& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
