#include "qldpc/tanner_graph.hpp"

#include <stdexcept>

namespace qldpc {

TannerGraph build_tanner_graph(const SparseGf2Matrix& h) {
  if (h.rows() == 0 || h.cols() == 0 || h.nnz() == 0) {
    throw std::invalid_argument(
        "build_tanner_graph: matrix must have rows, columns and at least one "
        "nonzero");
  }
  TannerGraph g;
  g.num_checks = h.rows();
  g.num_vars = h.cols();
  g.edge_var.reserve(h.nnz());
  g.edge_check.reserve(h.nnz());
  g.check_offsets.reserve(h.rows() + 1);
  g.check_offsets.push_back(0);
  for (std::size_t m = 0; m < h.rows(); ++m) {
    for (std::uint32_t n : h.row_support(m)) {
      g.edge_var.push_back(n);
      g.edge_check.push_back(static_cast<std::uint32_t>(m));
    }
    g.check_offsets.push_back(static_cast<std::uint32_t>(g.edge_var.size()));
  }

  std::vector<std::uint32_t> degrees(g.num_vars, 0);
  for (std::uint32_t n : g.edge_var) ++degrees[n];
  g.var_offsets.assign(g.num_vars + 1, 0);
  for (std::size_t n = 0; n < g.num_vars; ++n) {
    g.var_offsets[n + 1] = g.var_offsets[n] + degrees[n];
  }
  g.var_edges.resize(g.num_edges());
  std::vector<std::uint32_t> cursor(g.var_offsets.begin(),
                                    g.var_offsets.end() - 1);
  for (std::uint32_t e = 0; e < g.num_edges(); ++e) {
    g.var_edges[cursor[g.edge_var[e]]++] = e;
  }
  return g;
}

}  // namespace qldpc
