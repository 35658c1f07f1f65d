#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qldpc/css_code.hpp"
#include "qldpc/decoder.hpp"

namespace qldpc {

/// One latency measurement campaign over a single (code, mode, batch size)
/// combination. Syndromes come from a pre-built pool sampled at rate p, so
/// timing never includes error sampling. The default configuration is the
/// reference protocol: 10 iterations, early termination off, float
/// arithmetic.
struct BenchConfig {
  Arithmetic mode = Arithmetic::kFloat;
  double alpha = 0.8;
  std::size_t max_iterations = 10;
  bool early_termination = false;
  std::size_t batch = 1;      // decode calls per timed batch invocation
  unsigned threads = 1;       // worker threads; 0 = hardware concurrency
  std::size_t warmup_batches = 100;   // run but excluded from statistics
  std::size_t measure_batches = 200;  // batches feeding the statistics
  double p = 0.01;            // physical error rate for the syndrome pool
  std::uint64_t seed = 1;
};

/// One CSV row. Latency statistics are wall-clock per decode, i.e. the
/// end-to-end time of a batch invocation (input copy-in, decode, estimate
/// copy-out) divided by the batch size, in microseconds. kernel_frac is the
/// fraction of per-decode busy time spent inside the iteration kernel.
/// trials counts batch invocations (warmup + measured).
struct BenchRecord {
  std::string code;
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t d = 0;
  std::string mode;
  double alpha = 0.0;
  std::size_t imax = 0;
  bool early_term = false;
  std::size_t batch = 0;
  unsigned threads = 0;  // effective worker count
  std::size_t trials = 0;
  double min_us = 0.0;
  double mean_us = 0.0;
  double median_us = 0.0;
  double p99_us = 0.0;
  double max_us = 0.0;
  double conv_rate = 0.0;
  double kernel_frac = 0.0;
  bool under_63us = false;  // mean_us below the 63 us real-time budget
};

struct BenchResult {
  BenchRecord record;
  /// FNV-1a digest over every measured decode output (converged flag,
  /// iteration count, estimate bits) in batch order. Equal digests across
  /// repeat runs and across thread counts certify output determinism.
  std::uint64_t output_digest = 0;
  /// Smallest and largest iterations_used across all measured decodes.
  /// With early termination off both equal the iteration cap.
  std::size_t min_iterations_used = 0;
  std::size_t max_iterations_used = 0;
};

/// Runs the benchmark. Worker decoders and all buffers are allocated before
/// the first warmup batch; the timed region per batch covers copy-in,
/// decode, and copy-out only. Throws std::invalid_argument for a zero batch
/// or zero measure_batches.
BenchResult run_bench(const CssCode& code, const BenchConfig& cfg);

/// Nearest-rank percentile of an ascending-sorted, non-empty sample:
/// the element at rank ceil(pct/100 * N). pct must lie in (0, 100].
double percentile_nearest_rank(std::span<const double> sorted, double pct);

/// The exact column list, without a trailing newline.
std::string_view bench_csv_header();

/// Formats one row in header column order, without a trailing newline.
/// Throws std::invalid_argument if a string field contains a comma or
/// newline (the format has no quoting).
std::string bench_csv_row(const BenchRecord& rec);

/// Writes a host-descriptor comment line, the header, and one line per row.
void write_bench_csv(std::ostream& os, std::span<const BenchRecord> rows);

/// Parses what write_bench_csv produces: '#' comment lines are skipped, the
/// header must match bench_csv_header() exactly, and every row must have
/// the full column count, parse, and satisfy the record invariants
/// (min <= median <= p99 <= max, mean within [min, max], rates in [0, 1]).
/// Throws std::runtime_error naming the offending line otherwise.
std::vector<BenchRecord> read_bench_csv(std::istream& is);
std::vector<BenchRecord> read_bench_csv_file(const std::string& path);

/// One line describing the machine: CPU model, hardware thread count,
/// compiler. Emitted as a comment in the CSV output.
std::string host_descriptor();

}  // namespace qldpc
