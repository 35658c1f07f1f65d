#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "qldpc/css_code.hpp"
#include "qldpc/gf2.hpp"
#include "qldpc/tanner_graph.hpp"

namespace qldpc {

enum class Arithmetic { kFloat, kInt8, kInt16 };

/// "float", "int8" or "int16".
std::string_view arithmetic_name(Arithmetic mode);
/// Inverse of arithmetic_name; throws std::invalid_argument otherwise.
Arithmetic parse_arithmetic(std::string_view name);

struct DecoderConfig {
  std::size_t max_iterations = 10;
  // Scaling factor applied to every check-to-variable message, in (0, 1].
  double alpha = 0.8;
  // When true, decoding stops as soon as the tentative estimate reproduces
  // the syndrome; when false, exactly max_iterations run and the syndrome
  // check only classifies the final estimate.
  bool early_termination = true;
  // Per-variable priors gamma_n; empty selects the uniform prior 1.
  std::vector<double> priors;
  Arithmetic arithmetic = Arithmetic::kFloat;
  // Integer modes hold messages as round(value * quant_scale), saturating
  // symmetrically at the type bound. 0 selects the default scale: 8 for
  // int8, 256 for int16. Ignored in float mode.
  double quant_scale = 0.0;
};

struct DecodeOutcome {
  Gf2Vector error_estimate;
  bool converged = false;
  std::size_t iterations_used = 0;
  // (H * estimate) XOR syndrome at the final state; all-zero iff converged.
  Gf2Vector syndrome_residual;
};

/// Syndrome bit to message sign: 0 -> +1, 1 -> -1.
int syndrome_sign(int s_bit);

/// Scaled min-sum check update for one check node. For every edge e,
/// r[e] = alpha * sigma * (product of signs of the other inputs) * (minimum
/// magnitude of the other inputs), with sigma = syndrome_sign(s_bit) and
/// sign(0) counted as +1. A degree-1 check has no "other inputs" and emits
/// alpha * sigma * 64, pinning its single variable to the syndrome value.
std::vector<double> check_node_update(std::span<const double> q_in, int s_bit,
                                      double alpha);

/// Variable update for one variable node: q[e] = gamma + sum of the other
/// r entries, computed as the full sum minus the excluded term.
std::vector<double> variable_node_update(double gamma,
                                         std::span<const double> r_in);

/// Posterior and hard decision: Q = gamma + sum of all r entries, bit = 1
/// iff Q < 0 (Q == 0 decides 0).
std::pair<double, int> posterior_and_decision(double gamma,
                                              std::span<const double> r_in);

/// round(value * scale) clamped to [-limit, +limit].
std::int32_t quantize_saturate(double value, double scale, std::int32_t limit);

/// A reusable scaled min-sum decoder bound to one graph. Construction
/// validates the configuration and allocates all message storage; decode
/// calls are then allocation-free (aside from output vectors) and strictly
/// deterministic. The graph (or code) must outlive the decoder. Instances
/// are not thread-safe; use one per worker.
class Decoder {
 public:
  /// Plain decoder over one graph.
  Decoder(const TannerGraph& graph, DecoderConfig cfg);
  /// Two-component decoder over the code's block-diagonal combined graph.
  /// Consumes concatenated syndromes s_x ++ s_z; with early termination the
  /// X and Z halves stop independently, so results are bit-identical to two
  /// separate decodes.
  Decoder(const CssCode& code, DecoderConfig cfg);
  ~Decoder();
  Decoder(Decoder&&) noexcept;
  Decoder& operator=(Decoder&&) noexcept;

  const DecoderConfig& config() const;
  std::size_t num_checks() const;
  std::size_t num_vars() const;

  DecodeOutcome decode(const Gf2Vector& syndrome);
  void decode_into(const Gf2Vector& syndrome, DecodeOutcome& out);

  /// Component-wise decode; only valid for decoders built from a CssCode.
  void decode_css_into(const Gf2Vector& s_x, const Gf2Vector& s_z,
                       DecodeOutcome& out_x, DecodeOutcome& out_z);

  /// Nanoseconds the most recent decode spent in message passing and
  /// convergence checks, excluding syndrome unpacking and output packing.
  std::uint64_t last_kernel_ns() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

DecodeOutcome decode(const TannerGraph& graph, const Gf2Vector& syndrome,
                     const DecoderConfig& cfg);

/// Decodes each syndrome independently; elementwise identical to sequential
/// decode calls for every worker count. num_workers 0 uses the hardware
/// concurrency.
std::vector<DecodeOutcome> decode_batch(const TannerGraph& graph,
                                        std::span<const Gf2Vector> syndromes,
                                        const DecoderConfig& cfg,
                                        unsigned num_workers = 1);

struct CssDecodeResult {
  DecodeOutcome x;  // estimate of the X error, decoded from s_x through hz
  DecodeOutcome z;  // estimate of the Z error, decoded from s_z through hx
};

/// One decode over the combined block-diagonal graph, reported per
/// component.
CssDecodeResult decode_css(const CssCode& code, const Gf2Vector& s_x,
                           const Gf2Vector& s_z, const DecoderConfig& cfg);

}  // namespace qldpc
