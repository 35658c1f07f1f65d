#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qldpc/gf2.hpp"

namespace qldpc {

/// Bipartite check/variable adjacency of a parity-check matrix, stored as a
/// flat edge list. Edges are ordered row-major (by check, then by column), so
/// each check's edges occupy a contiguous id range. The variable side
/// addresses the same edges through a precomputed permutation.
struct TannerGraph {
  std::size_t num_checks = 0;
  std::size_t num_vars = 0;

  // Per-edge endpoints, indexed by edge id.
  std::vector<std::uint32_t> edge_var;
  std::vector<std::uint32_t> edge_check;

  // Edge ids of check m: [check_offsets[m], check_offsets[m+1]).
  std::vector<std::uint32_t> check_offsets;
  // Edge ids adjacent to variable n:
  // var_edges[var_offsets[n] .. var_offsets[n+1]).
  std::vector<std::uint32_t> var_offsets;
  std::vector<std::uint32_t> var_edges;

  std::size_t num_edges() const { return edge_var.size(); }

  std::size_t check_degree(std::size_t m) const {
    return check_offsets[m + 1] - check_offsets[m];
  }
  std::size_t var_degree(std::size_t n) const {
    return var_offsets[n + 1] - var_offsets[n];
  }

  std::span<const std::uint32_t> check_vars(std::size_t m) const {
    return std::span<const std::uint32_t>(edge_var)
        .subspan(check_offsets[m], check_degree(m));
  }

  std::span<const std::uint32_t> var_edge_ids(std::size_t n) const {
    return std::span<const std::uint32_t>(var_edges)
        .subspan(var_offsets[n], var_degree(n));
  }
};

/// Builds the graph of a nonempty matrix: one edge per nonzero entry,
/// row-major edge order.
TannerGraph build_tanner_graph(const SparseGf2Matrix& h);

}  // namespace qldpc
