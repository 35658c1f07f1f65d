#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "qldpc/css_code.hpp"
#include "qldpc/decoder.hpp"
#include "qldpc/gf2.hpp"
#include "qldpc/noise.hpp"

using namespace qldpc;

namespace {

SparseGf2Matrix toy_matrix() { return toy_code_3x6(); }

// Nullspace basis by dense elimination, kept independent of the bit-packed
// library routines.
std::vector<Gf2Vector> kernel_basis(const SparseGf2Matrix& h) {
  const std::size_t rows = h.rows();
  const std::size_t cols = h.cols();
  std::vector<std::vector<int>> a(rows, std::vector<int>(cols, 0));
  for (std::size_t m = 0; m < rows; ++m) {
    for (std::uint32_t c : h.row_support(m)) a[m][c] = 1;
  }
  std::vector<int> pivot_row_of_col(cols, -1);
  std::size_t next_row = 0;
  for (std::size_t c = 0; c < cols && next_row < rows; ++c) {
    std::size_t p = next_row;
    while (p < rows && a[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(a[next_row], a[p]);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i != next_row && a[i][c] != 0) {
        for (std::size_t j = 0; j < cols; ++j) a[i][j] ^= a[next_row][j];
      }
    }
    pivot_row_of_col[c] = static_cast<int>(next_row);
    ++next_row;
  }
  std::vector<Gf2Vector> basis;
  for (std::size_t f = 0; f < cols; ++f) {
    if (pivot_row_of_col[f] != -1) continue;
    Gf2Vector v(cols);
    v.set(f, true);
    for (std::size_t c = 0; c < cols; ++c) {
      const int pr = pivot_row_of_col[c];
      if (pr != -1 && a[pr][f] != 0) v.set(c, true);
    }
    basis.push_back(v);
  }
  return basis;
}

std::set<std::string> as_strings(const std::vector<Gf2Vector>& vs) {
  std::set<std::string> out;
  for (const auto& v : vs) out.insert(v.to_string01());
  return out;
}

// Minimum-weight solutions by per-weight combination search, one weight at
// a time. Deliberately a different algorithm shape than the library call it
// cross-checks.
std::vector<Gf2Vector> leaders_by_weight(const SparseGf2Matrix& h,
                                         const Gf2Vector& s,
                                         std::size_t w_max) {
  const std::size_t n = h.cols();
  if (s.is_zero()) return {Gf2Vector(n)};
  std::vector<Gf2Vector> col_syndrome;
  for (std::size_t j = 0; j < n; ++j) {
    Gf2Vector unit(n);
    unit.set(j, true);
    col_syndrome.push_back(mat_vec_mul(h, unit));
  }
  for (std::size_t w = 1; w <= w_max && w <= n; ++w) {
    std::vector<Gf2Vector> found;
    std::vector<std::size_t> idx(w);
    for (std::size_t i = 0; i < w; ++i) idx[i] = i;
    while (true) {
      Gf2Vector acc(h.rows());
      for (std::size_t i : idx) acc ^= col_syndrome[i];
      if (acc == s) {
        Gf2Vector e(n);
        for (std::size_t i : idx) e.set(i, true);
        found.push_back(e);
      }
      // advance to the next combination
      std::size_t k = w;
      while (k > 0 && idx[k - 1] == n - w + (k - 1)) --k;
      if (k == 0) break;
      ++idx[k - 1];
      for (std::size_t i = k; i < w; ++i) idx[i] = idx[i - 1] + 1;
    }
    if (!found.empty()) return found;
  }
  return {};
}

bool rows_equal(const TrialResult& a, const TrialResult& b) {
  return a.trial == b.trial && a.e_x == b.e_x && a.e_z == b.e_z &&
         a.ex_hat == b.ex_hat && a.ez_hat == b.ez_hat &&
         a.converged_x == b.converged_x && a.converged_z == b.converged_z &&
         a.iterations_x == b.iterations_x &&
         a.iterations_z == b.iterations_z &&
         a.classification == b.classification;
}

}  // namespace

TEST_CASE("noise kind names") {
  CHECK(noise_kind_name(NoiseKind::kIndependentXZ) == "independent-xz");
  CHECK(noise_kind_name(NoiseKind::kDepolarizing) == "depolarizing");
  CHECK(parse_noise_kind("independent-xz") == NoiseKind::kIndependentXZ);
  CHECK(parse_noise_kind("depolarizing") == NoiseKind::kDepolarizing);
  CHECK_THROWS_AS(parse_noise_kind("amplitude-damping"),
                  std::invalid_argument);
}

TEST_CASE("sampling extremes") {
  NoiseModel model;
  model.seed = 9;

  model.p = 0.0;
  for (NoiseKind kind : {NoiseKind::kIndependentXZ, NoiseKind::kDepolarizing}) {
    model.kind = kind;
    PauliError e = sample_error(model, 300, 4);
    CHECK(e.x.is_zero());
    CHECK(e.z.is_zero());
    CHECK(e.x.size() == 300);
  }

  model.p = 1.0;
  model.kind = NoiseKind::kIndependentXZ;
  PauliError e = sample_error(model, 300, 4);
  CHECK(e.x.weight() == 300);
  CHECK(e.z.weight() == 300);
}

TEST_CASE("depolarizing marginals") {
  // At p = 1 exactly one of X, Y, Z hits each qubit: the X bit is set by X
  // or Y (probability 2/3), the Z bit by Z or Y (2/3), both by Y (1/3).
  NoiseModel model{NoiseKind::kDepolarizing, 1.0, 77};
  const std::size_t n = 100000;
  PauliError e = sample_error(model, n, 0);

  std::size_t y_count = 0;
  std::size_t none = 0;
  for (std::size_t i = 0; i < n; ++i) {
    y_count += e.x.get(i) && e.z.get(i);
    none += !e.x.get(i) && !e.z.get(i);
  }
  CHECK(none == 0);
  const double x_rate = double(e.x.weight()) / double(n);
  const double z_rate = double(e.z.weight()) / double(n);
  const double y_rate = double(y_count) / double(n);
  // 3 sigma of a binomial proportion at these rates is under 0.005.
  CHECK(std::abs(x_rate - 2.0 / 3.0) < 0.005);
  CHECK(std::abs(z_rate - 2.0 / 3.0) < 0.005);
  CHECK(std::abs(y_rate - 1.0 / 3.0) < 0.005);
}

TEST_CASE("independent marginals") {
  NoiseModel model{NoiseKind::kIndependentXZ, 0.1, 123};
  const std::size_t n = 100000;
  PauliError e = sample_error(model, n, 0);
  const double x_rate = double(e.x.weight()) / double(n);
  const double z_rate = double(e.z.weight()) / double(n);
  CHECK(std::abs(x_rate - 0.1) < 0.003);
  CHECK(std::abs(z_rate - 0.1) < 0.003);

  // Joint rate must look like the product of the marginals.
  std::size_t both = 0;
  for (std::size_t i = 0; i < n; ++i) both += e.x.get(i) && e.z.get(i);
  CHECK(std::abs(double(both) / double(n) - 0.01) < 0.003);
}

TEST_CASE("sampling is deterministic per trial") {
  NoiseModel model{NoiseKind::kDepolarizing, 0.2, 5};
  PauliError a = sample_error(model, 500, 17);
  PauliError b = sample_error(model, 500, 17);
  CHECK(a.x == b.x);
  CHECK(a.z == b.z);

  PauliError c = sample_error(model, 500, 18);
  CHECK_FALSE(a.x == c.x);

  model.seed = 6;
  PauliError d = sample_error(model, 500, 17);
  CHECK_FALSE(a.x == d.x);
}

TEST_CASE("syndrome extraction") {
  CssCode code = make_builtin_code("bb72");
  const std::size_t n = code.num_qubits();

  SyndromePair zero = extract_syndromes(code, Gf2Vector(n), Gf2Vector(n));
  CHECK(zero.s_x.is_zero());
  CHECK(zero.s_z.is_zero());
  CHECK(zero.s_x.size() == code.hz().rows());
  CHECK(zero.s_z.size() == code.hx().rows());

  // A single X error on qubit j trips exactly the hz checks containing j.
  Gf2Vector e_x(n);
  e_x.set(5, true);
  SyndromePair s = extract_syndromes(code, e_x, Gf2Vector(n));
  CHECK(s.s_z.is_zero());
  Gf2Vector expected(code.hz().rows());
  for (std::uint32_t m : code.hz().col_support(5)) expected.set(m, true);
  CHECK(s.s_x == expected);

  CHECK_THROWS_AS(extract_syndromes(code, Gf2Vector(n - 1), Gf2Vector(n)),
                  std::invalid_argument);
}

TEST_CASE("residual classification") {
  CssCode code = make_builtin_code("bb72");
  const std::size_t n = code.num_qubits();
  const Gf2Vector zero(n);

  CHECK(classification_name(Classification::kExact) == "exact");
  CHECK(classification_name(Classification::kNonConverged) == "non-converged");

  SUBCASE("exact match") {
    Gf2Vector e(n);
    e.set(3, true);
    CHECK(classify_residual(code, e, e, zero, zero) == Classification::kExact);
  }

  SUBCASE("stabilizer-equivalent estimates are harmless") {
    Gf2Vector e(n);
    e.set(3, true);
    Gf2Vector ex_hat = e ^ code.hx().row_vector(7);
    CHECK(classify_residual(code, e, ex_hat, zero, zero) ==
          Classification::kStabilizer);
    // Symmetrically for the Z species against hz.
    Gf2Vector ez_hat = e ^ code.hz().row_vector(2);
    CHECK(classify_residual(code, zero, zero, e, ez_hat) ==
          Classification::kStabilizer);
  }

  SUBCASE("undetectable non-stabilizer residuals are logical") {
    // Rows of hx lie in the kernel of hz but span only 30 of its 42
    // dimensions, so some kernel vector escapes the row space.
    std::vector<Gf2Vector> kernel = kernel_basis(code.hz());
    CHECK(kernel.size() == n - rank(code.hz()));
    const Gf2Vector* logical = nullptr;
    for (const auto& v : kernel) {
      CHECK(mat_vec_mul(code.hz(), v).is_zero());
      if (!in_row_space(code.hx(), v)) {
        logical = &v;
        break;
      }
    }
    REQUIRE(logical != nullptr);

    CHECK(classify_residual(code, *logical, zero, zero, zero) ==
          Classification::kLogicalX);
    CHECK(classify_residual(code, zero, zero, *logical, zero) ==
          Classification::kLogicalZ);
    CHECK(classify_residual(code, *logical, zero, *logical, zero) ==
          Classification::kLogicalBoth);
  }

  SUBCASE("prebuilt classifier agrees with the free function") {
    ResidualClassifier classifier(code);
    std::mt19937 gen(7);
    std::bernoulli_distribution bit(0.03);
    for (int trial = 0; trial < 50; ++trial) {
      Gf2Vector e_x(n), ex_hat(n), e_z(n), ez_hat(n);
      for (std::size_t i = 0; i < n; ++i) {
        e_x.set(i, bit(gen));
        ex_hat.set(i, bit(gen));
        e_z.set(i, bit(gen));
        ez_hat.set(i, bit(gen));
      }
      CHECK(classifier.classify(e_x, ex_hat, e_z, ez_hat) ==
            classify_residual(code, e_x, ex_hat, e_z, ez_hat));
    }
  }
}

TEST_CASE("coset leader search") {
  SparseGf2Matrix h = toy_matrix();

  SUBCASE("zero syndrome has the zero leader") {
    auto leaders = brute_force_coset_leader(h, Gf2Vector(3), 6);
    REQUIRE(leaders.size() == 1);
    CHECK(leaders[0].is_zero());
  }

  SUBCASE("known toy cosets") {
    // Columns 0 and 3 both produce syndrome 110: two weight-1 leaders.
    auto leaders =
        brute_force_coset_leader(h, Gf2Vector::from_string01("110"), 6);
    CHECK(as_strings(leaders) ==
          std::set<std::string>{"100000", "000100"});

    // 100 is outside the column span: no solution at any weight.
    CHECK(brute_force_coset_leader(h, Gf2Vector::from_string01("100"), 6)
              .empty());

    // The weight budget is a hard cutoff.
    CHECK(brute_force_coset_leader(h, Gf2Vector::from_string01("110"), 0)
              .empty());
  }

  SUBCASE("agrees with per-weight enumeration on random 12-column cases") {
    std::mt19937 gen(19);
    std::bernoulli_distribution bit(0.3);
    for (int round = 0; round < 10; ++round) {
      std::vector<std::vector<int>> dense(5, std::vector<int>(12, 0));
      for (auto& row : dense) {
        for (auto& v : row) v = bit(gen) ? 1 : 0;
      }
      dense[0][0] = 1;
      SparseGf2Matrix m = SparseGf2Matrix::from_dense(dense);
      Gf2Vector s(5);
      for (std::size_t i = 0; i < 5; ++i) s.set(i, bit(gen));
      CHECK(as_strings(brute_force_coset_leader(m, s, 4)) ==
            as_strings(leaders_by_weight(m, s, 4)));
    }
  }

  SUBCASE("wide matrices take the combination path") {
    std::mt19937 gen(43);
    std::bernoulli_distribution bit(0.25);
    std::vector<std::vector<int>> dense(8, std::vector<int>(24, 0));
    for (auto& row : dense) {
      for (auto& v : row) v = bit(gen) ? 1 : 0;
    }
    dense[0][0] = 1;
    SparseGf2Matrix m = SparseGf2Matrix::from_dense(dense);

    // Syndrome of a planted weight-2 error, so a solution exists.
    Gf2Vector planted(24);
    planted.set(3, true);
    planted.set(17, true);
    const Gf2Vector s = mat_vec_mul(m, planted);
    auto got = brute_force_coset_leader(m, s, 3);
    CHECK(as_strings(got) == as_strings(leaders_by_weight(m, s, 3)));
    CHECK_FALSE(got.empty());
  }

  SUBCASE("input validation") {
    CHECK_THROWS_AS(brute_force_coset_leader(h, Gf2Vector(4), 6),
                    std::invalid_argument);
    SparseGf2Matrix wide(2, 31, {{0, 0}, {1, 30}});
    CHECK_THROWS_AS(brute_force_coset_leader(wide, Gf2Vector(2), 2),
                    std::invalid_argument);
  }
}

TEST_CASE("campaign with p = 0 is all-exact") {
  CssCode code = make_builtin_code("bb72");
  NoiseModel model{NoiseKind::kIndependentXZ, 0.0, 1};
  DecoderConfig cfg;
  CampaignResult result = run_campaign(code, model, 200, cfg);
  CHECK(result.trials == 200);
  CHECK(result.exact == 200);
  CHECK(result.logical_error_rate == 0.0);
  CHECK(result.baseline_logical_rate == 0.0);
  CHECK(result.convergence_rate == 1.0);
  CHECK(result.mean_iterations == 1.0);
}

TEST_CASE("campaign determinism and sink delivery") {
  CssCode code = make_builtin_code("bb72");
  NoiseModel model{NoiseKind::kIndependentXZ, 0.02, 42};
  DecoderConfig cfg;
  cfg.alpha = 0.8;
  const std::size_t trials = 400;

  std::vector<TrialResult> rows_a;
  CampaignResult a = run_campaign(code, model, trials, cfg, 1,
                                  [&](const TrialResult& r) {
                                    rows_a.push_back(r);
                                  });

  std::vector<TrialResult> rows_b;
  CampaignResult b = run_campaign(code, model, trials, cfg, 3,
                                  [&](const TrialResult& r) {
                                    rows_b.push_back(r);
                                  });

  CHECK(a.exact == b.exact);
  CHECK(a.stabilizer == b.stabilizer);
  CHECK(a.logical_x == b.logical_x);
  CHECK(a.logical_z == b.logical_z);
  CHECK(a.logical_both == b.logical_both);
  CHECK(a.non_converged == b.non_converged);
  CHECK(a.logical_error_rate == b.logical_error_rate);
  CHECK(a.baseline_logical_rate == b.baseline_logical_rate);
  CHECK(a.mean_iterations == b.mean_iterations);

  REQUIRE(rows_a.size() == trials);
  REQUIRE(rows_b.size() == trials);
  for (std::size_t t = 0; t < trials; ++t) {
    CHECK(rows_a[t].trial == t);  // delivered in trial order
    CHECK(rows_equal(rows_a[t], rows_b[t]));
  }

  // Spot-check the rows against independent recomputation.
  ResidualClassifier classifier(code);
  std::size_t converged_both = 0;
  for (const TrialResult& row : rows_a) {
    const PauliError e = sample_error(model, code.num_qubits(), row.trial);
    CHECK(row.e_x == e.x);
    CHECK(row.e_z == e.z);
    if (row.converged_x) {
      CHECK(mat_vec_mul(code.hz(), row.ex_hat) ==
            mat_vec_mul(code.hz(), row.e_x));
    }
    if (row.converged_z) {
      CHECK(mat_vec_mul(code.hx(), row.ez_hat) ==
            mat_vec_mul(code.hx(), row.e_z));
    }
    const Classification expected =
        row.converged_x && row.converged_z
            ? classifier.classify(row.e_x, row.ex_hat, row.e_z, row.ez_hat)
            : Classification::kNonConverged;
    CHECK(row.classification == expected);
    converged_both += row.converged_x && row.converged_z;
  }
  CHECK(a.convergence_rate == double(converged_both) / double(trials));
  CHECK(a.exact + a.stabilizer + a.logical_x + a.logical_z + a.logical_both +
            a.non_converged ==
        trials);
}

TEST_CASE("campaign edge cases") {
  CssCode code = make_builtin_code("bb72");
  NoiseModel model{NoiseKind::kIndependentXZ, 0.01, 3};
  DecoderConfig cfg;
  CampaignResult empty = run_campaign(code, model, 0, cfg);
  CHECK(empty.trials == 0);
  CHECK(empty.logical_error_rate == 0.0);
  CHECK(empty.convergence_rate == 0.0);
}

TEST_CASE("decoding beats the identity baseline at moderate noise") {
  CssCode code = make_builtin_code("bb72");
  NoiseModel model{NoiseKind::kIndependentXZ, 0.01, 2026};
  DecoderConfig cfg;
  cfg.alpha = 0.8;
  CampaignResult result = run_campaign(code, model, 2000, cfg, 2);
  CHECK(result.logical_error_rate < result.baseline_logical_rate);
  // At this noise level most trials carry a nonzero error, so the identity
  // baseline fails most of the time while the decoder rarely does.
  CHECK(result.baseline_logical_rate > 0.5);
  CHECK(result.logical_error_rate < 0.05);
}
