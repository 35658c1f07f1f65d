#include "qldpc/decoder.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>
#include <variant>

namespace qldpc {

namespace {

// Emission magnitude of a degree-1 check, which has no other inputs to take
// a minimum over and must simply pin its variable to the syndrome value.
constexpr double kLargeFloat = 64.0;

// Symmetric clamp on stored float messages. Message magnitudes can grow
// geometrically on adversarial graph/config combinations; the clamp keeps
// every stored value finite without affecting any realistic operating point.
constexpr double kFloatClamp = 1e30;

struct Segment {
  std::uint32_t check_begin = 0;
  std::uint32_t check_end = 0;
  std::uint32_t var_begin = 0;
  std::uint32_t var_end = 0;
};

struct SegmentState {
  bool frozen = false;
  bool converged = false;
  std::size_t iterations = 0;
};

struct FloatTraits {
  using Msg = float;
  using Acc = double;
  using Gamma = float;
  static constexpr bool kQuantized = false;
};

struct Int8Traits {
  using Msg = std::int8_t;
  using Acc = std::int32_t;
  using Gamma = std::int32_t;
  static constexpr bool kQuantized = true;
  static constexpr std::int32_t kMax = 127;
  static constexpr double kDefaultScale = 8.0;
};

struct Int16Traits {
  using Msg = std::int16_t;
  using Acc = std::int32_t;
  using Gamma = std::int32_t;
  static constexpr bool kQuantized = true;
  static constexpr std::int32_t kMax = 32767;
  static constexpr double kDefaultScale = 256.0;
};

double prior_value(const DecoderConfig& cfg, std::size_t n) {
  return cfg.priors.empty() ? 1.0 : cfg.priors[n];
}

template <typename Traits>
class Engine {
 public:
  using Msg = typename Traits::Msg;
  using Acc = typename Traits::Acc;

  Engine(const TannerGraph& graph, const DecoderConfig& cfg,
         std::vector<Segment> segments)
      : g_(&graph),
        segments_(std::move(segments)),
        max_iterations_(cfg.max_iterations),
        early_termination_(cfg.early_termination),
        alpha_(cfg.alpha) {
    const std::size_t num_vars = graph.num_vars;
    gamma_.resize(num_vars);
    if constexpr (Traits::kQuantized) {
      const double scale =
          cfg.quant_scale != 0.0 ? cfg.quant_scale : Traits::kDefaultScale;
      if (!(scale > 0.0) || !std::isfinite(scale)) {
        throw std::invalid_argument(
            "DecoderConfig: quant_scale must be positive and finite");
      }
      alpha_fx_ = static_cast<std::uint32_t>(std::lround(alpha_ * 65536.0));
      if (alpha_fx_ == 0) {
        throw std::invalid_argument(
            "DecoderConfig: alpha is too small for the fixed-point message "
            "scaling");
      }
      // Variable sums run in 32-bit; make sure no degree can reach the wrap
      // point even with every term saturated.
      std::size_t max_degree = 0;
      for (std::size_t n = 0; n < num_vars; ++n) {
        max_degree = std::max(max_degree, graph.var_degree(n));
      }
      const auto limit = static_cast<std::size_t>(
          std::numeric_limits<std::int32_t>::max() / Traits::kMax);
      if (max_degree + 1 > limit) {
        throw std::invalid_argument(
            "DecoderConfig: variable degree too large for 32-bit "
            "accumulation in this integer mode");
      }
      for (std::size_t n = 0; n < num_vars; ++n) {
        const double p = prior_value(cfg, n);
        if (!std::isfinite(p)) {
          throw std::invalid_argument("DecoderConfig: prior at variable " +
                                      std::to_string(n) + " is not finite");
        }
        const std::int32_t quantized = quantize_saturate(p, scale, Traits::kMax);
        if (quantized == 0) {
          throw std::invalid_argument(
              "DecoderConfig: prior at variable " + std::to_string(n) +
              " quantizes to 0 and would make the decoder inert; increase "
              "quant_scale");
        }
        gamma_[n] = quantized;
      }
    } else {
      for (std::size_t n = 0; n < num_vars; ++n) {
        const double p = prior_value(cfg, n);
        if (!std::isfinite(p)) {
          throw std::invalid_argument("DecoderConfig: prior at variable " +
                                      std::to_string(n) + " is not finite");
        }
        gamma_[n] = static_cast<float>(p);
      }
    }
    q_.resize(graph.num_edges());
    r_.resize(graph.num_edges());
    sigma_.resize(graph.num_checks);
    s_bits_.resize(graph.num_checks);
    e_hat_.resize(num_vars);
    residual_.resize(graph.num_checks);
    seg_state_.resize(segments_.size());
  }

  const TannerGraph& graph() const { return *g_; }
  std::size_t num_segments() const { return segments_.size(); }
  const Segment& segment(std::size_t i) const { return segments_[i]; }
  std::uint64_t kernel_ns() const { return kernel_ns_; }

  void decode(const Gf2Vector& syndrome) {
    for (std::size_t m = 0; m < g_->num_checks; ++m) {
      const std::uint8_t bit = syndrome.get(m);
      s_bits_[m] = bit;
      sigma_[m] = bit ? -1 : 1;
    }
    for (auto& st : seg_state_) st = SegmentState{};

    const auto t0 = std::chrono::steady_clock::now();
    for (std::size_t e = 0; e < q_.size(); ++e) {
      q_[e] = static_cast<Msg>(gamma_[g_->edge_var[e]]);
    }

    std::size_t iter = 0;
    std::size_t frozen = 0;
    while (iter < max_iterations_ && frozen < segments_.size()) {
      ++iter;
      for (std::size_t si = 0; si < segments_.size(); ++si) {
        if (seg_state_[si].frozen) continue;
        cn_stage(segments_[si]);
        vn_stage(segments_[si]);
      }
      if (early_termination_) {
        for (std::size_t si = 0; si < segments_.size(); ++si) {
          SegmentState& st = seg_state_[si];
          if (st.frozen) continue;
          if (check_segment(segments_[si])) {
            st.frozen = true;
            st.converged = true;
            st.iterations = iter;
            ++frozen;
          }
        }
      }
    }
    for (std::size_t si = 0; si < segments_.size(); ++si) {
      SegmentState& st = seg_state_[si];
      if (st.frozen) continue;
      st.iterations = iter;
      st.converged = check_segment(segments_[si]);
    }
    kernel_ns_ = static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::nanoseconds>(
            std::chrono::steady_clock::now() - t0)
            .count());
  }

  void pack_segment(std::size_t si, DecodeOutcome& out) const {
    const Segment& seg = segments_[si];
    const SegmentState& st = seg_state_[si];
    fill_bits(out.error_estimate, e_hat_, seg.var_begin, seg.var_end);
    fill_bits(out.syndrome_residual, residual_, seg.check_begin,
              seg.check_end);
    out.converged = st.converged;
    out.iterations_used = st.iterations;
  }

  void pack_global(DecodeOutcome& out) const {
    fill_bits(out.error_estimate, e_hat_, 0, g_->num_vars);
    fill_bits(out.syndrome_residual, residual_, 0, g_->num_checks);
    out.converged = true;
    out.iterations_used = 0;
    for (const SegmentState& st : seg_state_) {
      out.converged = out.converged && st.converged;
      out.iterations_used = std::max(out.iterations_used, st.iterations);
    }
  }

 private:
  static void fill_bits(Gf2Vector& out, const std::vector<std::uint8_t>& bits,
                        std::size_t begin, std::size_t end) {
    const std::size_t len = end - begin;
    if (out.size() != len) out = Gf2Vector(len);
    for (std::uint64_t& w : out.words()) w = 0;
    for (std::size_t i = 0; i < len; ++i) {
      if (bits[begin + i]) out.set(i, true);
    }
  }

  std::int32_t scale_q16(std::int32_t magnitude) const {
    return static_cast<std::int32_t>(
        (static_cast<std::int64_t>(magnitude) * alpha_fx_ + 32768) >> 16);
  }

  static Msg store(Acc value) {
    if constexpr (Traits::kQuantized) {
      const Acc limit = Traits::kMax;
      return static_cast<Msg>(value > limit    ? limit
                              : value < -limit ? -limit
                                               : value);
    } else {
      const double clamped = value > kFloatClamp    ? kFloatClamp
                             : value < -kFloatClamp ? -kFloatClamp
                                                    : value;
      return static_cast<Msg>(clamped);
    }
  }

  void cn_stage(const Segment& seg) {
    const auto& offsets = g_->check_offsets;
    for (std::uint32_t m = seg.check_begin; m < seg.check_end; ++m) {
      const std::uint32_t begin = offsets[m];
      const std::uint32_t end = offsets[m + 1];
      const int sg = sigma_[m];
      if (end - begin == 1) {
        if constexpr (Traits::kQuantized) {
          const std::int32_t mag = scale_q16(Traits::kMax);
          r_[begin] = static_cast<Msg>(sg < 0 ? -mag : mag);
        } else {
          r_[begin] = static_cast<float>(alpha_ * sg * kLargeFloat);
        }
        continue;
      }
      if constexpr (Traits::kQuantized) {
        std::int32_t min1 = std::numeric_limits<std::int32_t>::max();
        std::int32_t min2 = min1;
        std::uint32_t min_edge = begin;
        unsigned negatives = 0;
        for (std::uint32_t e = begin; e < end; ++e) {
          const std::int32_t v = q_[e];
          const bool neg = v < 0;
          negatives += neg;
          const std::int32_t mag = neg ? -v : v;
          if (mag < min1) {
            min2 = min1;
            min1 = mag;
            min_edge = e;
          } else if (mag < min2) {
            min2 = mag;
          }
        }
        for (std::uint32_t e = begin; e < end; ++e) {
          const bool self_neg = q_[e] < 0;
          const bool flip = ((negatives - unsigned(self_neg)) & 1u) != 0;
          const std::int32_t scaled = scale_q16(e == min_edge ? min2 : min1);
          r_[e] = static_cast<Msg>((sg < 0) != flip ? -scaled : scaled);
        }
      } else {
        double min1 = std::numeric_limits<double>::infinity();
        double min2 = min1;
        std::uint32_t min_edge = begin;
        unsigned negatives = 0;
        for (std::uint32_t e = begin; e < end; ++e) {
          const float v = q_[e];
          const bool neg = v < 0.0f;
          negatives += neg;
          const double mag = std::fabs(static_cast<double>(v));
          if (mag < min1) {
            min2 = min1;
            min1 = mag;
            min_edge = e;
          } else if (mag < min2) {
            min2 = mag;
          }
        }
        const double alpha_sigma = alpha_ * sg;
        for (std::uint32_t e = begin; e < end; ++e) {
          const bool self_neg = q_[e] < 0.0f;
          const bool flip = ((negatives - unsigned(self_neg)) & 1u) != 0;
          const double val = alpha_sigma * (e == min_edge ? min2 : min1);
          r_[e] = static_cast<float>(flip ? -val : val);
        }
      }
    }
  }

  void vn_stage(const Segment& seg) {
    const auto& offsets = g_->var_offsets;
    const auto& edges = g_->var_edges;
    for (std::uint32_t n = seg.var_begin; n < seg.var_end; ++n) {
      const std::uint32_t begin = offsets[n];
      const std::uint32_t end = offsets[n + 1];
      Acc total = gamma_[n];
      for (std::uint32_t i = begin; i < end; ++i) {
        total += static_cast<Acc>(r_[edges[i]]);
      }
      e_hat_[n] = total < 0;
      if (end - begin == 1) {
        // The excluded sum is empty; writing gamma directly avoids the
        // round-off of (gamma + r) - r.
        q_[edges[begin]] = static_cast<Msg>(gamma_[n]);
        continue;
      }
      for (std::uint32_t i = begin; i < end; ++i) {
        const std::uint32_t e = edges[i];
        q_[e] = store(total - static_cast<Acc>(r_[e]));
      }
    }
  }

  bool check_segment(const Segment& seg) {
    const auto& offsets = g_->check_offsets;
    const auto& ev = g_->edge_var;
    bool ok = true;
    for (std::uint32_t m = seg.check_begin; m < seg.check_end; ++m) {
      std::uint8_t parity = s_bits_[m];
      for (std::uint32_t e = offsets[m]; e < offsets[m + 1]; ++e) {
        parity ^= e_hat_[ev[e]];
      }
      residual_[m] = parity;
      ok = ok && parity == 0;
    }
    return ok;
  }

  const TannerGraph* g_;
  std::vector<Segment> segments_;
  std::size_t max_iterations_;
  bool early_termination_;
  double alpha_;
  std::uint32_t alpha_fx_ = 0;

  std::vector<typename Traits::Gamma> gamma_;
  std::vector<Msg> q_;
  std::vector<Msg> r_;
  std::vector<std::int8_t> sigma_;
  std::vector<std::uint8_t> s_bits_;
  std::vector<std::uint8_t> e_hat_;
  std::vector<std::uint8_t> residual_;
  std::vector<SegmentState> seg_state_;
  std::uint64_t kernel_ns_ = 0;
};

using EngineVariant =
    std::variant<Engine<FloatTraits>, Engine<Int8Traits>, Engine<Int16Traits>>;

void validate_common(const TannerGraph& graph, const DecoderConfig& cfg) {
  if (cfg.max_iterations < 1) {
    throw std::invalid_argument(
        "DecoderConfig: max_iterations must be at least 1");
  }
  if (!(cfg.alpha > 0.0 && cfg.alpha <= 1.0)) {
    throw std::invalid_argument("DecoderConfig: alpha must lie in (0, 1]");
  }
  if (!cfg.priors.empty() && cfg.priors.size() != graph.num_vars) {
    throw std::invalid_argument(
        "DecoderConfig: " + std::to_string(cfg.priors.size()) +
        " priors given but the graph has " + std::to_string(graph.num_vars) +
        " variables");
  }
}

EngineVariant make_engine(const TannerGraph& graph, const DecoderConfig& cfg,
                          std::vector<Segment> segments) {
  validate_common(graph, cfg);
  switch (cfg.arithmetic) {
    case Arithmetic::kFloat:
      return EngineVariant(std::in_place_type<Engine<FloatTraits>>, graph, cfg,
                           std::move(segments));
    case Arithmetic::kInt8:
      return EngineVariant(std::in_place_type<Engine<Int8Traits>>, graph, cfg,
                           std::move(segments));
    case Arithmetic::kInt16:
      return EngineVariant(std::in_place_type<Engine<Int16Traits>>, graph, cfg,
                           std::move(segments));
  }
  throw std::invalid_argument("DecoderConfig: unknown arithmetic mode");
}

std::vector<Segment> whole_graph_segment(const TannerGraph& graph) {
  Segment seg;
  seg.check_begin = 0;
  seg.check_end = static_cast<std::uint32_t>(graph.num_checks);
  seg.var_begin = 0;
  seg.var_end = static_cast<std::uint32_t>(graph.num_vars);
  return {seg};
}

std::vector<Segment> css_segments(const CssCode& code) {
  // The combined graph stacks the X component (checks = rows of hz) above
  // the Z component (checks = rows of hx); variables follow the same split.
  const auto mz = static_cast<std::uint32_t>(code.hz().rows());
  const auto mx = static_cast<std::uint32_t>(code.hx().rows());
  const auto n = static_cast<std::uint32_t>(code.num_qubits());
  Segment x{0, mz, 0, n};
  Segment z{mz, mz + mx, n, 2 * n};
  return {x, z};
}

}  // namespace

std::string_view arithmetic_name(Arithmetic mode) {
  switch (mode) {
    case Arithmetic::kFloat:
      return "float";
    case Arithmetic::kInt8:
      return "int8";
    case Arithmetic::kInt16:
      return "int16";
  }
  return "unknown";
}

Arithmetic parse_arithmetic(std::string_view name) {
  if (name == "float") return Arithmetic::kFloat;
  if (name == "int8") return Arithmetic::kInt8;
  if (name == "int16") return Arithmetic::kInt16;
  throw std::invalid_argument("unknown arithmetic mode '" + std::string(name) +
                              "' (expected float, int8 or int16)");
}

int syndrome_sign(int s_bit) {
  if (s_bit != 0 && s_bit != 1) {
    throw std::invalid_argument("syndrome_sign: bit must be 0 or 1");
  }
  return s_bit == 0 ? 1 : -1;
}

std::vector<double> check_node_update(std::span<const double> q_in, int s_bit,
                                      double alpha) {
  if (q_in.empty()) {
    throw std::invalid_argument(
        "check_node_update: at least one input message required");
  }
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("check_node_update: alpha must lie in (0, 1]");
  }
  const double alpha_sigma = alpha * syndrome_sign(s_bit);
  if (q_in.size() == 1) {
    return {alpha_sigma * kLargeFloat};
  }
  std::vector<double> r(q_in.size());
  for (std::size_t i = 0; i < q_in.size(); ++i) {
    double min_mag = std::numeric_limits<double>::infinity();
    bool flip = false;
    for (std::size_t j = 0; j < q_in.size(); ++j) {
      if (j == i) continue;
      flip ^= q_in[j] < 0.0;
      min_mag = std::min(min_mag, std::fabs(q_in[j]));
    }
    const double val = alpha_sigma * min_mag;
    r[i] = flip ? -val : val;
  }
  return r;
}

std::vector<double> variable_node_update(double gamma,
                                         std::span<const double> r_in) {
  if (r_in.size() == 1) return {gamma};
  double total = gamma;
  for (double v : r_in) total += v;
  std::vector<double> q(r_in.size());
  for (std::size_t i = 0; i < r_in.size(); ++i) q[i] = total - r_in[i];
  return q;
}

std::pair<double, int> posterior_and_decision(double gamma,
                                              std::span<const double> r_in) {
  double total = gamma;
  for (double v : r_in) total += v;
  return {total, total < 0.0 ? 1 : 0};
}

std::int32_t quantize_saturate(double value, double scale,
                               std::int32_t limit) {
  const double scaled = value * scale;
  if (std::isnan(scaled)) {
    throw std::invalid_argument("quantize_saturate: value is NaN");
  }
  if (scaled >= static_cast<double>(limit)) return limit;
  if (scaled <= static_cast<double>(-limit)) return -limit;
  return static_cast<std::int32_t>(std::llround(scaled));
}

struct Decoder::Impl {
  Impl(const TannerGraph& graph, DecoderConfig config,
       std::vector<Segment> segments)
      : cfg(std::move(config)),
        engine(make_engine(graph, cfg, std::move(segments))) {}

  DecoderConfig cfg;
  EngineVariant engine;
};

Decoder::Decoder(const TannerGraph& graph, DecoderConfig cfg)
    : impl_(std::make_unique<Impl>(graph, std::move(cfg),
                                   whole_graph_segment(graph))) {}

Decoder::Decoder(const CssCode& code, DecoderConfig cfg)
    : impl_(std::make_unique<Impl>(code.combined_graph(), std::move(cfg),
                                   css_segments(code))) {}

Decoder::~Decoder() = default;
Decoder::Decoder(Decoder&&) noexcept = default;
Decoder& Decoder::operator=(Decoder&&) noexcept = default;

const DecoderConfig& Decoder::config() const { return impl_->cfg; }

std::size_t Decoder::num_checks() const {
  return std::visit([](const auto& eng) { return eng.graph().num_checks; },
                    impl_->engine);
}

std::size_t Decoder::num_vars() const {
  return std::visit([](const auto& eng) { return eng.graph().num_vars; },
                    impl_->engine);
}

DecodeOutcome Decoder::decode(const Gf2Vector& syndrome) {
  DecodeOutcome out;
  decode_into(syndrome, out);
  return out;
}

void Decoder::decode_into(const Gf2Vector& syndrome, DecodeOutcome& out) {
  std::visit(
      [&](auto& eng) {
        if (syndrome.size() != eng.graph().num_checks) {
          throw std::invalid_argument(
              "decode: syndrome has " + std::to_string(syndrome.size()) +
              " bits but the graph has " +
              std::to_string(eng.graph().num_checks) + " checks");
        }
        eng.decode(syndrome);
        eng.pack_global(out);
      },
      impl_->engine);
}

void Decoder::decode_css_into(const Gf2Vector& s_x, const Gf2Vector& s_z,
                              DecodeOutcome& out_x, DecodeOutcome& out_z) {
  std::visit(
      [&](auto& eng) {
        if (eng.num_segments() != 2) {
          throw std::invalid_argument(
              "decode_css_into: decoder was not built from a CssCode");
        }
        const std::size_t x_checks =
            eng.segment(0).check_end - eng.segment(0).check_begin;
        const std::size_t z_checks =
            eng.segment(1).check_end - eng.segment(1).check_begin;
        if (s_x.size() != x_checks || s_z.size() != z_checks) {
          throw std::invalid_argument(
              "decode_css_into: syndrome lengths (" +
              std::to_string(s_x.size()) + ", " + std::to_string(s_z.size()) +
              ") do not match the code's check counts (" +
              std::to_string(x_checks) + ", " + std::to_string(z_checks) +
              ")");
        }
        eng.decode(s_x.concat(s_z));
        eng.pack_segment(0, out_x);
        eng.pack_segment(1, out_z);
      },
      impl_->engine);
}

std::uint64_t Decoder::last_kernel_ns() const {
  return std::visit([](const auto& eng) { return eng.kernel_ns(); },
                    impl_->engine);
}

DecodeOutcome decode(const TannerGraph& graph, const Gf2Vector& syndrome,
                     const DecoderConfig& cfg) {
  Decoder decoder(graph, cfg);
  return decoder.decode(syndrome);
}

std::vector<DecodeOutcome> decode_batch(const TannerGraph& graph,
                                        std::span<const Gf2Vector> syndromes,
                                        const DecoderConfig& cfg,
                                        unsigned num_workers) {
  for (std::size_t i = 0; i < syndromes.size(); ++i) {
    if (syndromes[i].size() != graph.num_checks) {
      throw std::invalid_argument(
          "decode_batch: syndrome " + std::to_string(i) + " has " +
          std::to_string(syndromes[i].size()) + " bits but the graph has " +
          std::to_string(graph.num_checks) + " checks");
    }
  }
  std::vector<DecodeOutcome> out(syndromes.size());
  if (syndromes.empty()) return out;

  std::size_t workers =
      num_workers != 0
          ? num_workers
          : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, syndromes.size());

  if (workers <= 1) {
    Decoder decoder(graph, cfg);
    for (std::size_t i = 0; i < syndromes.size(); ++i) {
      decoder.decode_into(syndromes[i], out[i]);
    }
    return out;
  }

  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        Decoder decoder(graph, cfg);
        const std::size_t lo = w * syndromes.size() / workers;
        const std::size_t hi = (w + 1) * syndromes.size() / workers;
        for (std::size_t i = lo; i < hi; ++i) {
          decoder.decode_into(syndromes[i], out[i]);
        }
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (std::thread& t : pool) t.join();
  for (const std::exception_ptr& err : errors) {
    if (err) std::rethrow_exception(err);
  }
  return out;
}

CssDecodeResult decode_css(const CssCode& code, const Gf2Vector& s_x,
                           const Gf2Vector& s_z, const DecoderConfig& cfg) {
  Decoder decoder(code, cfg);
  CssDecodeResult result;
  decoder.decode_css_into(s_x, s_z, result.x, result.z);
  return result;
}

}  // namespace qldpc
