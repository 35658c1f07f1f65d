#include "qldpc/bench.hpp"

#include <algorithm>
#include <cassert>
#include <charconv>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <limits>
#include <mutex>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "qldpc/noise.hpp"

namespace qldpc {

namespace {

constexpr std::uint64_t kFnvBasis = 14695981039346656037ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

void digest_bytes(std::uint64_t& h, const void* data, std::size_t len) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= bytes[i];
    h *= kFnvPrime;
  }
}

/// Persistent threads woken once per batch, so thread creation never lands
/// inside a timed region.
class WorkerPool {
 public:
  WorkerPool(std::size_t workers, std::function<void(std::size_t)> job)
      : job_(std::move(job)) {
    threads_.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      threads_.emplace_back([this, w] { loop(w); });
    }
  }

  ~WorkerPool() {
    {
      std::lock_guard lock(mutex_);
      stop_ = true;
    }
    wake_.notify_all();
    for (std::thread& t : threads_) t.join();
  }

  void run_round() {
    {
      std::lock_guard lock(mutex_);
      ++generation_;
      pending_ = threads_.size();
    }
    wake_.notify_all();
    std::unique_lock lock(mutex_);
    done_.wait(lock, [this] { return pending_ == 0; });
    if (error_) {
      std::exception_ptr err = error_;
      error_ = nullptr;
      std::rethrow_exception(err);
    }
  }

 private:
  void loop(std::size_t id) {
    std::uint64_t seen = 0;
    for (;;) {
      std::unique_lock lock(mutex_);
      wake_.wait(lock, [&] { return stop_ || generation_ != seen; });
      if (stop_) return;
      seen = generation_;
      lock.unlock();
      std::exception_ptr err;
      try {
        job_(id);
      } catch (...) {
        err = std::current_exception();
      }
      lock.lock();
      if (err && !error_) error_ = err;
      if (--pending_ == 0) done_.notify_one();
    }
  }

  std::function<void(std::size_t)> job_;
  std::mutex mutex_;
  std::condition_variable wake_;
  std::condition_variable done_;
  std::uint64_t generation_ = 0;
  std::size_t pending_ = 0;
  bool stop_ = false;
  std::exception_ptr error_;
  std::vector<std::thread> threads_;
};

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

[[noreturn]] void fail_row(std::size_t line_no, const std::string& what) {
  throw std::runtime_error("bench csv: line " + std::to_string(line_no) +
                           ": " + what);
}

std::uint64_t parse_count(const std::string& text, const char* field,
                          std::size_t line_no) {
  std::uint64_t value = 0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end) {
    fail_row(line_no, std::string(field) + " is not a count: '" + text + "'");
  }
  return value;
}

double parse_real(const std::string& text, const char* field,
                  std::size_t line_no) {
  if (text.empty()) fail_row(line_no, std::string(field) + " is empty");
  char* end = nullptr;
  const double value = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size() || !std::isfinite(value)) {
    fail_row(line_no,
             std::string(field) + " is not a finite number: '" + text + "'");
  }
  return value;
}

bool parse_flag(const std::string& text, const char* field,
                std::size_t line_no) {
  if (text == "0") return false;
  if (text == "1") return true;
  fail_row(line_no, std::string(field) + " must be 0 or 1: '" + text + "'");
}

void check_no_separator(const std::string& value, const char* field) {
  if (value.find(',') != std::string::npos ||
      value.find('\n') != std::string::npos) {
    throw std::invalid_argument("bench csv: " + std::string(field) +
                                " must not contain commas or newlines: '" +
                                value + "'");
  }
}

}  // namespace

double percentile_nearest_rank(std::span<const double> sorted, double pct) {
  if (sorted.empty()) {
    throw std::invalid_argument("percentile of an empty sample");
  }
  if (!(pct > 0.0 && pct <= 100.0)) {
    throw std::invalid_argument("percentile rank must lie in (0, 100]");
  }
  auto rank =
      static_cast<std::size_t>(std::ceil(pct / 100.0 * sorted.size()));
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  return sorted[rank - 1];
}

BenchResult run_bench(const CssCode& code, const BenchConfig& cfg) {
  if (cfg.batch == 0) {
    throw std::invalid_argument("BenchConfig: batch must be at least 1");
  }
  if (cfg.measure_batches == 0) {
    throw std::invalid_argument(
        "BenchConfig: measure_batches must be at least 1");
  }

  DecoderConfig dcfg;
  dcfg.max_iterations = cfg.max_iterations;
  dcfg.alpha = cfg.alpha;
  dcfg.early_termination = cfg.early_termination;
  dcfg.arithmetic = cfg.mode;

  const std::size_t n = code.num_qubits();
  const std::size_t combined_checks = code.hx().rows() + code.hz().rows();
  const std::size_t estimate_words = (2 * n + 63) / 64;

  // Syndrome pool, sampled up front so the timed region never includes
  // error generation.
  const NoiseModel model{NoiseKind::kIndependentXZ, cfg.p, cfg.seed};
  const std::size_t pool_size = std::max<std::size_t>(cfg.batch, 256);
  std::vector<Gf2Vector> pool;
  pool.reserve(pool_size);
  for (std::size_t i = 0; i < pool_size; ++i) {
    const PauliError err = sample_error(model, n, i);
    const SyndromePair syn = extract_syndromes(code, err.x, err.z);
    pool.push_back(syn.s_x.concat(syn.s_z));
  }

  std::size_t workers =
      cfg.threads != 0 ? cfg.threads
                       : std::max(1u, std::thread::hardware_concurrency());
  workers = std::clamp<std::size_t>(workers, 1, cfg.batch);

  std::vector<Decoder> decoders;
  decoders.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) decoders.emplace_back(code, dcfg);

  std::vector<Gf2Vector> staging(cfg.batch, Gf2Vector(combined_checks));
  std::vector<DecodeOutcome> outcomes(cfg.batch);
  std::vector<unsigned char> out_converged(cfg.batch, 0);
  std::vector<std::uint64_t> out_iterations(cfg.batch, 0);
  std::vector<std::uint64_t> out_words(cfg.batch * estimate_words, 0);
  std::vector<std::uint64_t> busy_ns(workers, 0);
  std::vector<std::uint64_t> kernel_ns(workers, 0);

  using Clock = std::chrono::steady_clock;
  auto worker_job = [&](std::size_t w) {
    Decoder& decoder = decoders[w];
    const std::size_t lo = w * cfg.batch / workers;
    const std::size_t hi = (w + 1) * cfg.batch / workers;
    for (std::size_t i = lo; i < hi; ++i) {
      const auto d0 = Clock::now();
      decoder.decode_into(staging[i], outcomes[i]);
      const auto d1 = Clock::now();
      busy_ns[w] += static_cast<std::uint64_t>(
          std::chrono::duration_cast<std::chrono::nanoseconds>(d1 - d0)
              .count());
      kernel_ns[w] += decoder.last_kernel_ns();
    }
  };

  std::optional<WorkerPool> thread_pool;
  if (workers > 1) thread_pool.emplace(workers, worker_job);

  // End-to-end time of one batch invocation: syndrome copy-in, decode,
  // estimate copy-out.
  auto run_batch = [&](std::size_t batch_index) -> double {
    const auto t0 = Clock::now();
    for (std::size_t i = 0; i < cfg.batch; ++i) {
      staging[i] = pool[(batch_index * cfg.batch + i) % pool.size()];
    }
    if (thread_pool) {
      thread_pool->run_round();
    } else {
      worker_job(0);
    }
    for (std::size_t i = 0; i < cfg.batch; ++i) {
      out_converged[i] = outcomes[i].converged ? 1 : 0;
      out_iterations[i] = outcomes[i].iterations_used;
      const auto words = outcomes[i].error_estimate.words();
      std::copy(words.begin(), words.end(),
                out_words.begin() + i * estimate_words);
    }
    const auto t1 = Clock::now();
    return static_cast<double>(
        std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0)
            .count());
  };

  for (std::size_t b = 0; b < cfg.warmup_batches; ++b) run_batch(b);
  std::fill(busy_ns.begin(), busy_ns.end(), 0);
  std::fill(kernel_ns.begin(), kernel_ns.end(), 0);

  std::vector<double> samples_us;
  samples_us.reserve(cfg.measure_batches);
  std::uint64_t digest = kFnvBasis;
  std::size_t converged_count = 0;
  std::uint64_t min_iters = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t max_iters = 0;
  for (std::size_t b = 0; b < cfg.measure_batches; ++b) {
    const double wall_ns = run_batch(cfg.warmup_batches + b);
    samples_us.push_back(wall_ns / static_cast<double>(cfg.batch) / 1000.0);
    digest_bytes(digest, out_converged.data(), out_converged.size());
    digest_bytes(digest, out_iterations.data(),
                 out_iterations.size() * sizeof(std::uint64_t));
    digest_bytes(digest, out_words.data(),
                 out_words.size() * sizeof(std::uint64_t));
    for (unsigned char c : out_converged) converged_count += c;
    for (std::uint64_t it : out_iterations) {
      min_iters = std::min(min_iters, it);
      max_iters = std::max(max_iters, it);
    }
  }

  std::vector<double> sorted = samples_us;
  std::sort(sorted.begin(), sorted.end());
  const double mean_us =
      std::accumulate(samples_us.begin(), samples_us.end(), 0.0) /
      static_cast<double>(samples_us.size());
  const std::uint64_t busy_total =
      std::accumulate(busy_ns.begin(), busy_ns.end(), std::uint64_t{0});
  const std::uint64_t kernel_total =
      std::accumulate(kernel_ns.begin(), kernel_ns.end(), std::uint64_t{0});

  BenchResult result;
  BenchRecord& rec = result.record;
  rec.code = code.name();
  rec.n = code.params().n;
  rec.k = code.params().k;
  rec.d = code.params().d;
  rec.mode = std::string(arithmetic_name(cfg.mode));
  rec.alpha = cfg.alpha;
  rec.imax = cfg.max_iterations;
  rec.early_term = cfg.early_termination;
  rec.batch = cfg.batch;
  rec.threads = static_cast<unsigned>(workers);
  rec.trials = cfg.warmup_batches + cfg.measure_batches;
  rec.min_us = sorted.front();
  rec.mean_us = mean_us;
  rec.median_us = percentile_nearest_rank(sorted, 50.0);
  rec.p99_us = percentile_nearest_rank(sorted, 99.0);
  rec.max_us = sorted.back();
  rec.conv_rate = static_cast<double>(converged_count) /
                  static_cast<double>(cfg.measure_batches * cfg.batch);
  rec.kernel_frac = busy_total > 0 ? static_cast<double>(kernel_total) /
                                         static_cast<double>(busy_total)
                                   : 0.0;
  rec.under_63us = rec.mean_us < 63.0;
  result.output_digest = digest;
  result.min_iterations_used = static_cast<std::size_t>(min_iters);
  result.max_iterations_used = static_cast<std::size_t>(max_iters);
  return result;
}

std::string_view bench_csv_header() {
  return "code,n,k,d,mode,alpha,imax,early_term,batch,threads,trials,"
         "min_us,mean_us,median_us,p99_us,max_us,conv_rate,kernel_frac,"
         "under_63us";
}

std::string bench_csv_row(const BenchRecord& rec) {
  check_no_separator(rec.code, "code");
  check_no_separator(rec.mode, "mode");
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "%s,%zu,%zu,%zu,%s,%g,%zu,%d,%zu,%u,%zu,"
                "%.3f,%.3f,%.3f,%.3f,%.3f,%.6f,%.6f,%d",
                rec.code.c_str(), rec.n, rec.k, rec.d, rec.mode.c_str(),
                rec.alpha, rec.imax, rec.early_term ? 1 : 0, rec.batch,
                rec.threads, rec.trials, rec.min_us, rec.mean_us,
                rec.median_us, rec.p99_us, rec.max_us, rec.conv_rate,
                rec.kernel_frac, rec.under_63us ? 1 : 0);
  return buf;
}

void write_bench_csv(std::ostream& os, std::span<const BenchRecord> rows) {
  os << "# host: " << host_descriptor() << "\n";
  os << bench_csv_header() << "\n";
  for (const BenchRecord& rec : rows) os << bench_csv_row(rec) << "\n";
}

std::vector<BenchRecord> read_bench_csv(std::istream& is) {
  std::vector<BenchRecord> rows;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      if (line != bench_csv_header()) {
        fail_row(line_no, "header does not match the documented schema");
      }
      header_seen = true;
      continue;
    }
    const std::vector<std::string> f = split_fields(line);
    const std::size_t expected =
        1 + std::count(bench_csv_header().begin(), bench_csv_header().end(),
                       ',');
    if (f.size() != expected) {
      fail_row(line_no, "expected " + std::to_string(expected) +
                            " fields, found " + std::to_string(f.size()));
    }
    BenchRecord rec;
    rec.code = f[0];
    if (rec.code.empty()) fail_row(line_no, "code name is empty");
    rec.n = parse_count(f[1], "n", line_no);
    rec.k = parse_count(f[2], "k", line_no);
    rec.d = parse_count(f[3], "d", line_no);
    rec.mode = f[4];
    try {
      parse_arithmetic(rec.mode);
    } catch (const std::invalid_argument& e) {
      fail_row(line_no, e.what());
    }
    rec.alpha = parse_real(f[5], "alpha", line_no);
    if (!(rec.alpha > 0.0 && rec.alpha <= 1.0)) {
      fail_row(line_no, "alpha must lie in (0, 1]");
    }
    rec.imax = parse_count(f[6], "imax", line_no);
    if (rec.imax == 0) fail_row(line_no, "imax must be at least 1");
    rec.early_term = parse_flag(f[7], "early_term", line_no);
    rec.batch = parse_count(f[8], "batch", line_no);
    if (rec.batch == 0) fail_row(line_no, "batch must be at least 1");
    rec.threads =
        static_cast<unsigned>(parse_count(f[9], "threads", line_no));
    if (rec.threads == 0) fail_row(line_no, "threads must be at least 1");
    rec.trials = parse_count(f[10], "trials", line_no);
    if (rec.trials == 0) fail_row(line_no, "trials must be at least 1");
    rec.min_us = parse_real(f[11], "min_us", line_no);
    rec.mean_us = parse_real(f[12], "mean_us", line_no);
    rec.median_us = parse_real(f[13], "median_us", line_no);
    rec.p99_us = parse_real(f[14], "p99_us", line_no);
    rec.max_us = parse_real(f[15], "max_us", line_no);
    if (rec.min_us < 0.0) fail_row(line_no, "min_us must be non-negative");
    if (!(rec.min_us <= rec.median_us && rec.median_us <= rec.p99_us &&
          rec.p99_us <= rec.max_us)) {
      fail_row(line_no, "latency percentiles must be non-decreasing");
    }
    if (!(rec.min_us <= rec.mean_us && rec.mean_us <= rec.max_us)) {
      fail_row(line_no, "mean_us must lie within [min_us, max_us]");
    }
    rec.conv_rate = parse_real(f[16], "conv_rate", line_no);
    rec.kernel_frac = parse_real(f[17], "kernel_frac", line_no);
    if (!(rec.conv_rate >= 0.0 && rec.conv_rate <= 1.0)) {
      fail_row(line_no, "conv_rate must lie in [0, 1]");
    }
    if (!(rec.kernel_frac >= 0.0 && rec.kernel_frac <= 1.0)) {
      fail_row(line_no, "kernel_frac must lie in [0, 1]");
    }
    rec.under_63us = parse_flag(f[18], "under_63us", line_no);
    rows.push_back(std::move(rec));
  }
  if (!header_seen) {
    throw std::runtime_error("bench csv: no header line found");
  }
  return rows;
}

std::vector<BenchRecord> read_bench_csv_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) {
    throw std::runtime_error("cannot open bench csv file: " + path);
  }
  return read_bench_csv(is);
}

std::string host_descriptor() {
  std::string cpu = "unknown cpu";
  std::ifstream info("/proc/cpuinfo");
  std::string line;
  while (std::getline(info, line)) {
    if (line.rfind("model name", 0) == 0) {
      const std::size_t colon = line.find(':');
      if (colon != std::string::npos) {
        std::size_t start = line.find_first_not_of(" \t", colon + 1);
        if (start != std::string::npos) cpu = line.substr(start);
      }
      break;
    }
  }
  std::ostringstream os;
  os << cpu << "; " << std::thread::hardware_concurrency()
     << " hardware threads; compiler " << __VERSION__;
  return os.str();
}

}  // namespace qldpc
