#include "qldpc/noise.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <string>
#include <thread>

namespace qldpc {

namespace {

void validate_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("NoiseModel: p must lie in [0, 1]");
  }
}

// Distinct deterministic stream per (seed, trial) pair. The starting state
// is the mixed output of a seeder stepped to the trial index; without that
// extra mix, consecutive trials would read overlapping windows of a single
// SplitMix64 sequence and their samples would be correlated.
SplitMix64 trial_rng(const NoiseModel& model, std::uint64_t trial) {
  SplitMix64 seeder(model.seed + 0x9E3779B97F4A7C15ULL * trial);
  return SplitMix64(seeder.next());
}

Gf2Vector column_syndrome(const SparseGf2Matrix& h, std::size_t col) {
  Gf2Vector s(h.rows());
  for (std::uint32_t row : h.col_support(col)) s.set(row, true);
  return s;
}

Gf2Vector vector_from_mask(std::uint32_t mask, std::size_t n) {
  Gf2Vector v(n);
  for (std::size_t j = 0; j < n; ++j) {
    if ((mask >> j) & 1u) v.set(j, true);
  }
  return v;
}

bool is_logical(Classification c) {
  return c == Classification::kLogicalX || c == Classification::kLogicalZ ||
         c == Classification::kLogicalBoth;
}

}  // namespace

std::string_view noise_kind_name(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::kIndependentXZ:
      return "independent-xz";
    case NoiseKind::kDepolarizing:
      return "depolarizing";
  }
  return "unknown";
}

NoiseKind parse_noise_kind(std::string_view name) {
  if (name == "independent-xz") return NoiseKind::kIndependentXZ;
  if (name == "depolarizing") return NoiseKind::kDepolarizing;
  throw std::invalid_argument(
      "unknown noise kind '" + std::string(name) +
      "' (expected independent-xz or depolarizing)");
}

PauliError sample_error(const NoiseModel& model, std::size_t n,
                        std::uint64_t trial) {
  validate_probability(model.p);
  SplitMix64 rng = trial_rng(model, trial);
  PauliError err{Gf2Vector(n), Gf2Vector(n)};
  if (model.kind == NoiseKind::kIndependentXZ) {
    for (std::size_t i = 0; i < n; ++i) {
      if (rng.next_unit() < model.p) err.x.set(i, true);
      if (rng.next_unit() < model.p) err.z.set(i, true);
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      if (rng.next_unit() >= model.p) continue;
      switch (rng.next() % 3) {
        case 0:
          err.x.set(i, true);
          break;
        case 1:
          err.z.set(i, true);
          break;
        default:  // Y acts as X and Z together
          err.x.set(i, true);
          err.z.set(i, true);
          break;
      }
    }
  }
  return err;
}

SyndromePair extract_syndromes(const CssCode& code, const Gf2Vector& e_x,
                               const Gf2Vector& e_z) {
  if (e_x.size() != code.num_qubits() || e_z.size() != code.num_qubits()) {
    throw std::invalid_argument(
        "extract_syndromes: error vectors must have " +
        std::to_string(code.num_qubits()) + " bits");
  }
  return {mat_vec_mul(code.hz(), e_x), mat_vec_mul(code.hx(), e_z)};
}

std::string_view classification_name(Classification c) {
  switch (c) {
    case Classification::kExact:
      return "exact";
    case Classification::kStabilizer:
      return "stabilizer";
    case Classification::kLogicalX:
      return "logical-x";
    case Classification::kLogicalZ:
      return "logical-z";
    case Classification::kLogicalBoth:
      return "logical-both";
    case Classification::kNonConverged:
      return "non-converged";
  }
  return "unknown";
}

ResidualClassifier::ResidualClassifier(const CssCode& code)
    : basis_x_(code.hx()), basis_z_(code.hz()) {}

Classification ResidualClassifier::classify(const Gf2Vector& e_x,
                                            const Gf2Vector& ex_hat,
                                            const Gf2Vector& e_z,
                                            const Gf2Vector& ez_hat) const {
  const Gf2Vector r_x = e_x ^ ex_hat;
  const Gf2Vector r_z = e_z ^ ez_hat;
  if (r_x.is_zero() && r_z.is_zero()) return Classification::kExact;
  const bool x_harmless = r_x.is_zero() || basis_x_.contains(r_x);
  const bool z_harmless = r_z.is_zero() || basis_z_.contains(r_z);
  if (x_harmless && z_harmless) return Classification::kStabilizer;
  if (!x_harmless && !z_harmless) return Classification::kLogicalBoth;
  return x_harmless ? Classification::kLogicalZ : Classification::kLogicalX;
}

Classification classify_residual(const CssCode& code, const Gf2Vector& e_x,
                                 const Gf2Vector& ex_hat, const Gf2Vector& e_z,
                                 const Gf2Vector& ez_hat) {
  return ResidualClassifier(code).classify(e_x, ex_hat, e_z, ez_hat);
}

std::vector<Gf2Vector> brute_force_coset_leader(const SparseGf2Matrix& h,
                                                const Gf2Vector& s,
                                                std::size_t w_max) {
  if (s.size() != h.rows()) {
    throw std::invalid_argument(
        "brute_force_coset_leader: syndrome has " + std::to_string(s.size()) +
        " bits but the matrix has " + std::to_string(h.rows()) + " rows");
  }
  const std::size_t n = h.cols();
  if (n > 30) {
    throw std::invalid_argument(
        "brute_force_coset_leader: " + std::to_string(n) +
        " columns is too large for exhaustive search");
  }
  std::vector<Gf2Vector> col_syn(n);
  for (std::size_t j = 0; j < n; ++j) col_syn[j] = column_syndrome(h, j);

  if (n <= 20) {
    // Gray-code walk over all 2^n patterns, one column XOR per step.
    std::vector<Gf2Vector> best;
    std::size_t best_w = w_max + 1;
    std::uint32_t gray = 0;
    Gf2Vector acc(h.rows());
    if (s.is_zero()) {
      best_w = 0;
      best.push_back(Gf2Vector(n));
    }
    for (std::uint64_t i = 1; i < (std::uint64_t{1} << n); ++i) {
      const unsigned bit = std::countr_zero(i);
      gray ^= std::uint32_t{1} << bit;
      acc ^= col_syn[bit];
      const auto w = static_cast<std::size_t>(std::popcount(gray));
      if (w > w_max || w > best_w || acc != s) continue;
      if (w < best_w) {
        best_w = w;
        best.clear();
      }
      best.push_back(vector_from_mask(gray, n));
    }
    return best;
  }

  // 20 < n <= 30: lexicographic combinations by increasing weight; the
  // first weight with any solution is the answer.
  if (s.is_zero()) return {Gf2Vector(n)};
  for (std::size_t w = 1; w <= std::min(w_max, n); ++w) {
    std::vector<Gf2Vector> found;
    std::vector<std::uint32_t> idx(w);
    for (std::size_t i = 0; i < w; ++i) idx[i] = static_cast<std::uint32_t>(i);
    while (true) {
      Gf2Vector acc(h.rows());
      for (std::uint32_t j : idx) acc ^= col_syn[j];
      if (acc == s) {
        Gf2Vector v(n);
        for (std::uint32_t j : idx) v.set(j, true);
        found.push_back(std::move(v));
      }
      // advance to the next combination
      std::size_t pos = w;
      while (pos > 0 && idx[pos - 1] == n - w + pos - 1) --pos;
      if (pos == 0) break;
      ++idx[pos - 1];
      for (std::size_t i = pos; i < w; ++i) idx[i] = idx[i - 1] + 1;
    }
    if (!found.empty()) return found;
  }
  return {};
}

CampaignResult run_campaign(const CssCode& code, const NoiseModel& model,
                            std::size_t trials, const DecoderConfig& cfg,
                            unsigned num_workers, const TrialSink& sink) {
  validate_probability(model.p);
  CampaignResult agg;
  agg.trials = trials;
  if (trials == 0) return agg;

  const std::size_t n = code.num_qubits();
  const ResidualClassifier classifier(code);
  const Gf2Vector zero(n);

  struct LocalCounts {
    std::size_t by_class[6] = {};
    std::size_t baseline_fail = 0;
    std::size_t converged_both = 0;
    std::uint64_t iteration_sum = 0;
  };

  std::size_t workers =
      num_workers != 0
          ? num_workers
          : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, trials);

  std::vector<TrialResult> log;
  if (sink) log.resize(trials);

  std::vector<LocalCounts> locals(workers);
  std::vector<std::exception_ptr> errors(workers);

  auto work = [&](std::size_t w) {
    try {
      Decoder decoder(code, cfg);
      DecodeOutcome out_x, out_z;
      LocalCounts& local = locals[w];
      const std::size_t lo = w * trials / workers;
      const std::size_t hi = (w + 1) * trials / workers;
      for (std::size_t t = lo; t < hi; ++t) {
        const PauliError err = sample_error(model, n, t);
        const SyndromePair syn = extract_syndromes(code, err.x, err.z);
        decoder.decode_css_into(syn.s_x, syn.s_z, out_x, out_z);

        Classification cls;
        if (!out_x.converged || !out_z.converged) {
          cls = Classification::kNonConverged;
        } else {
          cls = classifier.classify(err.x, out_x.error_estimate, err.z,
                                    out_z.error_estimate);
        }
        local.by_class[static_cast<int>(cls)]++;
        if (is_logical(classifier.classify(err.x, zero, err.z, zero))) {
          local.baseline_fail++;
        }
        local.converged_both += out_x.converged && out_z.converged;
        local.iteration_sum +=
            std::max(out_x.iterations_used, out_z.iterations_used);

        if (sink) {
          TrialResult& row = log[t];
          row.trial = t;
          row.e_x = err.x;
          row.e_z = err.z;
          row.ex_hat = out_x.error_estimate;
          row.ez_hat = out_z.error_estimate;
          row.converged_x = out_x.converged;
          row.converged_z = out_z.converged;
          row.iterations_x = out_x.iterations_used;
          row.iterations_z = out_z.iterations_used;
          row.classification = cls;
        }
      }
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };

  if (workers <= 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (std::thread& t : pool) t.join();
  }
  for (const std::exception_ptr& err : errors) {
    if (err) std::rethrow_exception(err);
  }

  std::size_t baseline_fail = 0;
  std::size_t converged_both = 0;
  std::uint64_t iteration_sum = 0;
  for (const LocalCounts& local : locals) {
    agg.exact += local.by_class[static_cast<int>(Classification::kExact)];
    agg.stabilizer +=
        local.by_class[static_cast<int>(Classification::kStabilizer)];
    agg.logical_x +=
        local.by_class[static_cast<int>(Classification::kLogicalX)];
    agg.logical_z +=
        local.by_class[static_cast<int>(Classification::kLogicalZ)];
    agg.logical_both +=
        local.by_class[static_cast<int>(Classification::kLogicalBoth)];
    agg.non_converged +=
        local.by_class[static_cast<int>(Classification::kNonConverged)];
    baseline_fail += local.baseline_fail;
    converged_both += local.converged_both;
    iteration_sum += local.iteration_sum;
  }
  const auto denom = static_cast<double>(trials);
  agg.logical_error_rate =
      static_cast<double>(agg.logical_x + agg.logical_z + agg.logical_both +
                          agg.non_converged) /
      denom;
  agg.baseline_logical_rate = static_cast<double>(baseline_fail) / denom;
  agg.convergence_rate = static_cast<double>(converged_both) / denom;
  agg.mean_iterations = static_cast<double>(iteration_sum) / denom;

  if (sink) {
    for (const TrialResult& row : log) sink(row);
  }
  return agg;
}

}  // namespace qldpc
