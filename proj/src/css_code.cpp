#include "qldpc/css_code.hpp"

#include <algorithm>
#include <stdexcept>
#include <tuple>
#include <utility>

namespace qldpc {

namespace {

// Sum of the given monomials as an lm x lm permutation-sum matrix. Row
// u*m + v of x^i y^j has its single 1 at column ((u+i) mod l)*m + (v+j) mod m.
SparseGf2Matrix monomial_sum(std::size_t l, std::size_t m,
                             const std::vector<BbTerm>& terms,
                             const char* which) {
  std::vector<BbTerm> reduced;
  reduced.reserve(terms.size());
  for (const BbTerm& t : terms) {
    reduced.push_back({static_cast<std::uint32_t>(t.x_exp % l),
                       static_cast<std::uint32_t>(t.y_exp % m)});
  }
  auto key = [](const BbTerm& t) { return std::tuple(t.x_exp, t.y_exp); };
  std::vector<BbTerm> sorted = reduced;
  std::sort(sorted.begin(), sorted.end(),
            [&](const BbTerm& a, const BbTerm& b) { return key(a) < key(b); });
  const auto dup = std::adjacent_find(sorted.begin(), sorted.end());
  if (dup != sorted.end()) {
    throw std::invalid_argument(
        std::string("build_bb_code: duplicate monomial x^") +
        std::to_string(dup->x_exp) + " y^" + std::to_string(dup->y_exp) +
        " in " + which + " after exponent reduction");
  }

  const std::size_t lm = l * m;
  std::vector<std::vector<std::uint32_t>> rows(lm);
  for (std::size_t u = 0; u < l; ++u) {
    for (std::size_t v = 0; v < m; ++v) {
      auto& row = rows[u * m + v];
      row.reserve(reduced.size());
      for (const BbTerm& t : reduced) {
        const std::size_t u2 = (u + t.x_exp) % l;
        const std::size_t v2 = (v + t.y_exp) % m;
        row.push_back(static_cast<std::uint32_t>(u2 * m + v2));
      }
    }
  }
  return SparseGf2Matrix::from_row_support(lm, lm, rows);
}

SparseGf2Matrix hstack(const SparseGf2Matrix& left,
                       const SparseGf2Matrix& right) {
  std::vector<std::vector<std::uint32_t>> rows(left.rows());
  const auto shift = static_cast<std::uint32_t>(left.cols());
  for (std::size_t r = 0; r < left.rows(); ++r) {
    auto& row = rows[r];
    row = left.row_support(r);
    for (std::uint32_t c : right.row_support(r)) row.push_back(c + shift);
  }
  return SparseGf2Matrix::from_row_support(left.rows(),
                                           left.cols() + right.cols(), rows);
}

SparseGf2Matrix block_diag(const SparseGf2Matrix& top,
                           const SparseGf2Matrix& bottom) {
  std::vector<std::vector<std::uint32_t>> rows(top.rows() + bottom.rows());
  const auto shift = static_cast<std::uint32_t>(top.cols());
  for (std::size_t r = 0; r < top.rows(); ++r) rows[r] = top.row_support(r);
  for (std::size_t r = 0; r < bottom.rows(); ++r) {
    auto& row = rows[top.rows() + r];
    row.reserve(bottom.row_support(r).size());
    for (std::uint32_t c : bottom.row_support(r)) row.push_back(c + shift);
  }
  return SparseGf2Matrix::from_row_support(
      top.rows() + bottom.rows(), top.cols() + bottom.cols(), rows);
}

}  // namespace

CssCode::CssCode(std::string name, SparseGf2Matrix hx, SparseGf2Matrix hz,
                 std::size_t distance)
    : name_(std::move(name)), hx_(std::move(hx)), hz_(std::move(hz)) {
  if (hx_.rows() == 0 || hz_.rows() == 0 || hx_.cols() == 0) {
    throw std::invalid_argument("CssCode '" + name_ +
                                "': parity-check matrices must be non-empty");
  }
  if (hx_.cols() != hz_.cols()) {
    throw std::invalid_argument(
        "CssCode '" + name_ + "': hx has " + std::to_string(hx_.cols()) +
        " columns but hz has " + std::to_string(hz_.cols()));
  }

  // hx * hz^T must vanish entry by entry: every row pair overlaps in an even
  // number of positions.
  std::vector<char> marked(hx_.cols(), 0);
  for (std::size_t i = 0; i < hx_.rows(); ++i) {
    for (std::uint32_t c : hx_.row_support(i)) marked[c] = 1;
    for (std::size_t j = 0; j < hz_.rows(); ++j) {
      int parity = 0;
      for (std::uint32_t c : hz_.row_support(j)) parity ^= marked[c];
      if (parity != 0) {
        throw std::runtime_error(
            "CssCode '" + name_ + "': stabilizers do not commute, hx row " +
            std::to_string(i) + " overlaps hz row " + std::to_string(j) +
            " an odd number of times");
      }
    }
    for (std::uint32_t c : hx_.row_support(i)) marked[c] = 0;
  }

  params_.n = hx_.cols();
  // Commutativity makes rank(hx) + rank(hz) <= n, so k never underflows.
  params_.k = params_.n - rank(hx_) - rank(hz_);
  params_.d = distance;

  graph_x_ = build_tanner_graph(hz_);
  graph_z_ = build_tanner_graph(hx_);
  combined_ = block_diag(hz_, hx_);
  combined_graph_ = build_tanner_graph(combined_);
}

CssCode build_bb_code(const BbCodeSpec& spec, std::string name,
                      std::size_t distance) {
  if (spec.l == 0 || spec.m == 0) {
    throw std::invalid_argument("build_bb_code: l and m must be positive");
  }
  if (spec.a_terms.empty() || spec.b_terms.empty()) {
    throw std::invalid_argument("build_bb_code: term lists must be non-empty");
  }
  const SparseGf2Matrix a = monomial_sum(spec.l, spec.m, spec.a_terms,
                                         "a_terms");
  const SparseGf2Matrix b = monomial_sum(spec.l, spec.m, spec.b_terms,
                                         "b_terms");
  const SparseGf2Matrix hx = hstack(a, b);
  const SparseGf2Matrix hz = hstack(b.transpose(), a.transpose());
  if (name.empty()) name = "bb" + std::to_string(2 * spec.l * spec.m);
  return CssCode(std::move(name), hx, hz, distance);
}

const std::vector<BuiltinCode>& builtin_codes() {
  // A [[784, 24, 24]] member is sometimes quoted alongside this family, but
  // we could not confirm construction polynomials for it that pass the
  // commutativity and rank checks, so the largest shipped member is the
  // verified [[756, 16, 34]] code.
  static const std::vector<BuiltinCode> registry = {
      {"bb72",
       {6, 6, {{3, 0}, {0, 1}, {0, 2}}, {{0, 3}, {1, 0}, {2, 0}}},
       12, 6},
      {"bb108",
       {9, 6, {{3, 0}, {0, 1}, {0, 2}}, {{0, 3}, {1, 0}, {2, 0}}},
       8, 10},
      {"bb144",
       {12, 6, {{3, 0}, {0, 1}, {0, 2}}, {{0, 3}, {1, 0}, {2, 0}}},
       12, 12},
      {"bb288",
       {12, 12, {{3, 0}, {0, 2}, {0, 7}}, {{0, 3}, {1, 0}, {2, 0}}},
       12, 18},
      {"bb756",
       {21, 18, {{3, 0}, {0, 10}, {0, 17}}, {{0, 5}, {3, 0}, {19, 0}}},
       16, 34},
  };
  return registry;
}

CssCode make_builtin_code(const std::string& name) {
  for (const BuiltinCode& info : builtin_codes()) {
    if (info.name != name) continue;
    CssCode code = build_bb_code(info.spec, info.name, info.d);
    if (code.params().k != info.k) {
      throw std::runtime_error(
          "builtin code " + name + ": construction yields k=" +
          std::to_string(code.params().k) + " but the registry expects k=" +
          std::to_string(info.k));
    }
    return code;
  }
  std::string known;
  for (const BuiltinCode& info : builtin_codes()) {
    known += known.empty() ? info.name : ", " + info.name;
  }
  throw std::invalid_argument("unknown builtin code '" + name +
                              "' (available: " + known + ")");
}

SparseGf2Matrix toy_code_3x6() {
  return SparseGf2Matrix::from_dense({{1, 0, 1, 1, 0, 1},
                                      {1, 1, 0, 1, 1, 0},
                                      {0, 1, 1, 0, 1, 1}});
}

}  // namespace qldpc
