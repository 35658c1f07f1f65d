#pragma once

#include <cstdint>
#include <functional>
#include <string_view>
#include <vector>

#include "qldpc/css_code.hpp"
#include "qldpc/decoder.hpp"
#include "qldpc/gf2.hpp"

namespace qldpc {

enum class NoiseKind { kIndependentXZ, kDepolarizing };

/// "independent-xz" or "depolarizing".
std::string_view noise_kind_name(NoiseKind kind);
NoiseKind parse_noise_kind(std::string_view name);

struct NoiseModel {
  NoiseKind kind = NoiseKind::kIndependentXZ;
  double p = 0.0;  // per-qubit physical error rate, in [0, 1]
  std::uint64_t seed = 0;
};

/// SplitMix64 generator. Hand-rolled so that sampled errors are bit-stable
/// across platforms and standard libraries.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1) with 53 random bits.
  double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

struct PauliError {
  Gf2Vector x;
  Gf2Vector z;
};

/// Samples one error pattern on n qubits. independent-xz flips the X and Z
/// bits of each qubit independently with probability p each; depolarizing
/// applies one of X, Y, Z uniformly with total probability p (Y sets both
/// bits). Each trial index gets its own deterministic random stream, so
/// campaigns can be partitioned across workers in any order.
PauliError sample_error(const NoiseModel& model, std::size_t n,
                        std::uint64_t trial = 0);

struct SyndromePair {
  Gf2Vector s_x;  // hz * e_x
  Gf2Vector s_z;  // hx * e_z
};

SyndromePair extract_syndromes(const CssCode& code, const Gf2Vector& e_x,
                               const Gf2Vector& e_z);

enum class Classification {
  kExact,         // both residuals zero
  kStabilizer,    // residuals nonzero only up to stabilizer rows
  kLogicalX,      // X residual outside the row space of hx
  kLogicalZ,      // Z residual outside the row space of hz
  kLogicalBoth,
  kNonConverged,  // assigned by the campaign when a decode fails to converge
};

std::string_view classification_name(Classification c);

/// Classifies the residuals e ^ e_hat of both species: a residual is
/// harmless iff it lies in the row space of its own parity-check matrix
/// (r_x against hx, r_z against hz). Never returns kNonConverged.
Classification classify_residual(const CssCode& code, const Gf2Vector& e_x,
                                 const Gf2Vector& ex_hat, const Gf2Vector& e_z,
                                 const Gf2Vector& ez_hat);

/// Same classification with the row-space bases computed once.
class ResidualClassifier {
 public:
  explicit ResidualClassifier(const CssCode& code);

  Classification classify(const Gf2Vector& e_x, const Gf2Vector& ex_hat,
                          const Gf2Vector& e_z,
                          const Gf2Vector& ez_hat) const;

 private:
  Gf2RowBasis basis_x_;
  Gf2RowBasis basis_z_;
};

/// All minimum-weight solutions of h * e == s with weight at most w_max;
/// empty when no solution of weight <= w_max exists. Runs exhaustively over
/// 2^n patterns for n <= 20 and over weight-limited combinations for
/// n <= 30; larger matrices are rejected.
std::vector<Gf2Vector> brute_force_coset_leader(const SparseGf2Matrix& h,
                                                const Gf2Vector& s,
                                                std::size_t w_max);

struct TrialResult {
  std::uint64_t trial = 0;
  Gf2Vector e_x, e_z;        // sampled error
  Gf2Vector ex_hat, ez_hat;  // decoded estimate
  bool converged_x = false;
  bool converged_z = false;
  std::size_t iterations_x = 0;
  std::size_t iterations_z = 0;
  Classification classification = Classification::kNonConverged;
};

struct CampaignResult {
  std::size_t trials = 0;
  std::size_t exact = 0;
  std::size_t stabilizer = 0;
  std::size_t logical_x = 0;
  std::size_t logical_z = 0;
  std::size_t logical_both = 0;
  std::size_t non_converged = 0;

  // Failures are logical misclassifications plus non-converged trials.
  double logical_error_rate = 0.0;
  // Failure rate of the identity decoder (estimate always zero), measured
  // on the same sampled errors.
  double baseline_logical_rate = 0.0;
  // Fraction of trials where both components converged.
  double convergence_rate = 0.0;
  // Mean iterations the combined decode ran, i.e. max over the two
  // components per trial.
  double mean_iterations = 0.0;
};

using TrialSink = std::function<void(const TrialResult&)>;

/// Runs `trials` decode trials under the noise model. Deterministic for a
/// fixed model seed, independent of num_workers (0 = hardware concurrency).
/// When a sink is given every TrialResult is delivered to it in trial
/// order after the workers finish.
CampaignResult run_campaign(const CssCode& code, const NoiseModel& model,
                            std::size_t trials, const DecoderConfig& cfg,
                            unsigned num_workers = 1,
                            const TrialSink& sink = {});

}  // namespace qldpc
