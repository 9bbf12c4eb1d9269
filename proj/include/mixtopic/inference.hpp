#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "mixtopic/corpus.hpp"

namespace mixtopic {

struct GammaHyperprior {
  double shape = 2.0;
  double rate = 1.0;

  bool operator==(const GammaHyperprior&) const = default;
};

struct Hyperparams {
  std::vector<double> alpha;              // K
  std::vector<std::vector<double>> beta;  // per regular type: W_t entries
  std::vector<std::vector<double>> zeta;  // per lab: V_l entries
  std::vector<double> a, b;               // per lab Beta shapes

  GammaHyperprior alpha_prior, beta_prior, zeta_prior, ab_prior;

  double alpha_sum() const;

  bool operator==(const Hyperparams&) const = default;
};

// Variationally expected sufficient statistics shared across patients.
// Regular types are indexed densely 0..T-1 (lab type excluded), labs 0..L-1.
struct GlobalStats {
  std::vector<std::vector<double>> n_wk;  // per type: W_t x K, row-major by feature
  std::vector<std::vector<double>> n_k;   // per type: K totals (sum over features)
  std::vector<std::vector<double>> m_kv;  // per lab: K x V_l, row-major by topic
  std::vector<double> p;                  // L x K observed-test mass
  std::vector<double> q;                  // L x K missing-test mass

  void resize(const Schemas& schemas, int K);
  void clear();

  bool operator==(const GlobalStats&) const = default;
};

// Per-patient responsibilities and topic loads. gamma/lambda rows align with
// the PatientRecord's tokens/labs; pi blocks align with `missing`.
struct PatientPosterior {
  std::vector<double> gamma;            // tokens.size() x K
  std::vector<double> lambda;           // labs.size() x K
  std::vector<double> pi;               // concatenated K x V_l blocks
  std::vector<int> missing;             // dense lab indices with r = 0, ascending
  std::vector<std::size_t> pi_offset;   // block start per missing entry
  std::vector<double> n_load, m_load;   // K each

  bool operator==(const PatientPosterior&) const = default;
};

struct TrainConfig {
  int topics = 1;
  int max_iters = 100;
  double tol = 1e-6;
  std::uint64_t seed = 0;
  bool nmar = true;     // model the observation channel; false = MAR ablation
  bool mixview = true;  // include regular types; false = labs only
  int hyper_update_every = 1;  // M-step stride in sweeps; 0 disables it
  int threads = 1;
  double init_noise = 0.1;  // perturbation amplitude scale; 0 = symmetric init

  // Initial hyperparameter levels (empirical Bayes moves them from here).
  double alpha0 = 0.5, beta0 = 0.1, zeta0 = 1.0, a0 = 1.0, b0 = 1.0;
  GammaHyperprior hyperprior{2.0, 1.0};

  bool operator==(const TrainConfig&) const = default;
};

struct TraceRow {
  int iter = 0;
  double loglik = 0.0;
  double delta = 0.0;
  double seconds = 0.0;

  bool operator==(const TraceRow&) const = default;
};

struct TrainedModel {
  Schemas schemas;
  TrainConfig cfg;
  Hyperparams hp;
  GlobalStats stats;
  std::vector<PatientPosterior> posteriors;  // training state; enables resume
  std::vector<long long> patient_ids;
  std::vector<TraceRow> trace;
  int iters_done = 0;
};

// Maps corpus type/lab ids to the dense indices used by GlobalStats.
struct DenseIndex {
  std::vector<int> type_to_dense;  // type_id-1 -> dense regular index, -1 for lab
  int regular_count = 0;
  int lab_count = 0;

  static DenseIndex build(const Schemas& schemas);
};

Hyperparams make_hyperparams(const Schemas& schemas, const TrainConfig& cfg);

// Seeded uniform-plus-noise responsibilities, aggregated into GlobalStats.
void init_posteriors(const Corpus& c, const TrainConfig& cfg,
                     std::vector<PatientPosterior>& posteriors, GlobalStats& stats);

// --- single-entry CVB0 updates --------------------------------------------
// All count inputs must already exclude the entry's own contribution.

// Regular token: out[k] ~ (alpha_k + n_load_k + m_load_k) *
//                         (beta_w + n_w_k) / (beta_sum + n_tot_k).
void update_gamma(std::span<const double> alpha, std::span<const double> n_load,
                  std::span<const double> m_load, double beta_w, double beta_sum,
                  std::span<const double> n_w, std::span<const double> n_tot,
                  std::span<double> out);

// Observed lab; `observed` lists (dense value, count) pairs, the value term
// enters with multiplicity count. p/q are ignored when nmar is false.
void update_lambda_observed(std::span<const double> alpha, std::span<const double> n_load,
                            std::span<const double> m_load, std::span<const double> zeta,
                            std::span<const double> m_kv,
                            std::span<const std::pair<int, long>> observed, double a, double b,
                            std::span<const double> p, std::span<const double> q, bool nmar,
                            std::span<double> out);

// Missing lab under NMAR; out is a K x V block normalized jointly.
void update_pi_missing(std::span<const double> alpha, std::span<const double> n_load,
                       std::span<const double> m_load, std::span<const double> zeta,
                       std::span<const double> m_kv, double a, double b,
                       std::span<const double> p, std::span<const double> q,
                       std::span<double> out);

// One full sweep; returns the collapsed training log likelihood evaluated on
// the post-sweep statistics. threads > 1 runs the snapshot/delta scheme.
double e_step(const Corpus& c, const TrainConfig& cfg, const Hyperparams& hp,
              std::vector<PatientPosterior>& posteriors, GlobalStats& stats);

// Collapsed log p(x, y, r, z, h | hyperparams) with expected counts.
double joint_log_likelihood(const GlobalStats& stats, const Hyperparams& hp,
                            std::span<const PatientPosterior> posteriors);

struct MStepReport {
  int clamped = 0;  // updates floored at the positivity bound
  int skipped = 0;  // updates with non-positive denominator, value kept
};

// One empirical-Bayes fixed-point pass over all hyperparameter families.
MStepReport m_step(const GlobalStats& stats, std::span<const PatientPosterior> posteriors,
                   const TrainConfig& cfg, Hyperparams& hp);

using IterCallback =
    std::function<void(int iter, const Hyperparams& hp, const GlobalStats& stats)>;

TrainedModel train(const Corpus& c, const TrainConfig& cfg, const IterCallback& cb = {});

// Continues a trained model for additional sweeps on the same corpus;
// bit-identical to having trained iters_done + more_iters in one run.
void train_more(const Corpus& c, TrainedModel& model, int more_iters,
                const IterCallback& cb = {});

void write_trace_csv(std::span<const TraceRow> trace, const std::string& path);

}  // namespace mixtopic
