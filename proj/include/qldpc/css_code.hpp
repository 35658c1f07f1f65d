#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qldpc/gf2.hpp"
#include "qldpc/tanner_graph.hpp"

namespace qldpc {

/// [[n, k, d]] code parameters. n and k are structural; d is carried as
/// metadata only (0 = unknown) and is never computed or verified here.
struct CodeParams {
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t d = 0;
};

/// One monomial x^i y^j of a bivariate polynomial over the abelian group
/// Z_l x Z_m.
struct BbTerm {
  std::uint32_t x_exp = 0;
  std::uint32_t y_exp = 0;
  friend bool operator==(const BbTerm&, const BbTerm&) = default;
};

/// Construction parameters for a bivariate bicycle code on n = 2*l*m qubits.
/// With x = S_l tensor I_m and y = I_l tensor S_m (S_k the k x k cyclic
/// shift), A and B are the sums of the listed monomials, and
/// H_X = [A | B], H_Z = [B^T | A^T]. A and B always commute, so the CSS
/// condition holds by construction.
struct BbCodeSpec {
  std::size_t l = 0;
  std::size_t m = 0;
  std::vector<BbTerm> a_terms;
  std::vector<BbTerm> b_terms;
};

/// A CSS code: paired parity-check matrices satisfying hx * hz^T == 0 over
/// GF(2). X errors are observed through hz (s_x = hz * e_x) and decoded on
/// the graph of hz; Z errors symmetrically through hx. The logical qubit
/// count k is always computed from ranks, never trusted from metadata.
class CssCode {
 public:
  /// Throws std::invalid_argument on shape mismatch or empty matrices and
  /// std::runtime_error if the matrices do not commute (the first offending
  /// row pair is named).
  CssCode(std::string name, SparseGf2Matrix hx, SparseGf2Matrix hz,
          std::size_t distance = 0);

  const std::string& name() const { return name_; }
  const CodeParams& params() const { return params_; }
  std::size_t num_qubits() const { return params_.n; }

  const SparseGf2Matrix& hx() const { return hx_; }
  const SparseGf2Matrix& hz() const { return hz_; }

  /// Graph for decoding X errors (checks = rows of hz).
  const TannerGraph& graph_x() const { return graph_x_; }
  /// Graph for decoding Z errors (checks = rows of hx).
  const TannerGraph& graph_z() const { return graph_z_; }

  /// Block-diagonal matrix diag(hz, hx) and its graph. One decode over this
  /// graph consumes the concatenated syndrome s_x ++ s_z and produces the
  /// concatenated estimate e_x ++ e_z.
  const SparseGf2Matrix& combined_matrix() const { return combined_; }
  const TannerGraph& combined_graph() const { return combined_graph_; }

 private:
  std::string name_;
  SparseGf2Matrix hx_;
  SparseGf2Matrix hz_;
  SparseGf2Matrix combined_;
  TannerGraph graph_x_;
  TannerGraph graph_z_;
  TannerGraph combined_graph_;
  CodeParams params_;
};

/// Builds and fully validates a bivariate bicycle code. An empty name
/// defaults to "bb<n>". Throws std::invalid_argument for malformed specs
/// (l or m zero, empty term lists, duplicate terms after exponent
/// reduction).
CssCode build_bb_code(const BbCodeSpec& spec, std::string name = {},
                      std::size_t distance = 0);

struct BuiltinCode {
  std::string name;
  BbCodeSpec spec;
  std::size_t k;  // logical qubits the construction must reproduce
  std::size_t d;  // best known distance bound, metadata only
};

/// The shipped bivariate bicycle codes, smallest first.
const std::vector<BuiltinCode>& builtin_codes();

/// Builds a registry entry by name and cross-checks the computed k against
/// the registry value. Throws std::invalid_argument for unknown names.
CssCode make_builtin_code(const std::string& name);

/// 3x6 parity-check fixture: every check has degree 4, every variable
/// degree 2, and the rank is 2. Columns 0/3, 1/4 and 2/5 are pairwise equal,
/// so every syndrome with a solution has several of minimum weight.
SparseGf2Matrix toy_code_3x6();

}  // namespace qldpc
