#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstddef>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "qldpc/gf2.hpp"

using namespace qldpc;

namespace {

// Three checks of degree 4 on six variables; row 0 XOR row 1 equals row 2,
// so the rank is 2.
SparseGf2Matrix toy_matrix() {
  return SparseGf2Matrix::from_dense({{1, 0, 1, 1, 0, 1},
                                      {1, 1, 0, 1, 1, 0},
                                      {0, 1, 1, 0, 1, 1}});
}

// Textbook Gaussian elimination on an int matrix, kept deliberately separate
// from the bit-packed implementation under test.
std::size_t dense_rank(std::vector<std::vector<int>> rows) {
  if (rows.empty() || rows[0].empty()) return 0;
  const std::size_t ncols = rows[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < ncols && r < rows.size(); ++c) {
    std::size_t pivot = r;
    while (pivot < rows.size() && rows[pivot][c] == 0) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[r], rows[pivot]);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i != r && rows[i][c] != 0) {
        for (std::size_t j = 0; j < ncols; ++j) rows[i][j] ^= rows[r][j];
      }
    }
    ++r;
  }
  return r;
}

std::vector<std::vector<int>> random_dense(std::mt19937& gen, std::size_t rows,
                                           std::size_t cols, double density) {
  std::bernoulli_distribution bit(density);
  std::vector<std::vector<int>> out(rows, std::vector<int>(cols, 0));
  for (auto& row : out) {
    for (auto& v : row) v = bit(gen) ? 1 : 0;
  }
  return out;
}

// Every XOR combination of the matrix rows, as 0/1 strings.
std::set<std::string> span_of_rows(const SparseGf2Matrix& h) {
  std::set<std::string> out;
  const std::size_t nrows = h.rows();
  REQUIRE(nrows <= 16);
  for (std::size_t mask = 0; mask < (std::size_t{1} << nrows); ++mask) {
    Gf2Vector acc(h.cols());
    for (std::size_t m = 0; m < nrows; ++m) {
      if ((mask >> m) & 1) acc ^= h.row_vector(m);
    }
    out.insert(acc.to_string01());
  }
  return out;
}

}  // namespace

TEST_CASE("vector construction and accessors") {
  Gf2Vector v = Gf2Vector::from_string01("10110001");
  CHECK(v.size() == 8);
  CHECK(v.weight() == 4);
  CHECK_FALSE(v.is_zero());
  CHECK(v.get(0));
  CHECK_FALSE(v.get(1));
  CHECK(v.get(7));
  CHECK(v.to_string01() == "10110001");

  CHECK(Gf2Vector::from_bits({1, 0, 1}) == Gf2Vector::from_string01("101"));
  CHECK(Gf2Vector(5).is_zero());
  CHECK(Gf2Vector(5).weight() == 0);
  CHECK(Gf2Vector(0).to_string01().empty());

  Gf2Vector w(3);
  w.set(1, true);
  CHECK(w == Gf2Vector::from_string01("010"));
  w.flip(1);
  w.flip(2);
  CHECK(w == Gf2Vector::from_string01("001"));

  CHECK_THROWS_AS(Gf2Vector::from_string01("012"), std::invalid_argument);
  CHECK_THROWS_AS(Gf2Vector::from_bits({1, 2}), std::invalid_argument);
}

TEST_CASE("vector xor, slice, concat") {
  Gf2Vector a = Gf2Vector::from_string01("1100");
  Gf2Vector b = Gf2Vector::from_string01("1010");
  CHECK((a ^ b) == Gf2Vector::from_string01("0110"));
  CHECK((a ^ a).is_zero());
  CHECK_THROWS_AS(a ^= Gf2Vector(3), std::invalid_argument);

  Gf2Vector v = Gf2Vector::from_string01("0110110");
  CHECK(v.slice(1, 5) == Gf2Vector::from_string01("1101"));
  CHECK(v.slice(0, 7) == v);
  CHECK(v.slice(3, 3).size() == 0);
  CHECK_THROWS_AS(v.slice(5, 3), std::invalid_argument);
  CHECK_THROWS_AS(v.slice(0, 8), std::invalid_argument);

  CHECK(Gf2Vector::from_string01("101").concat(Gf2Vector::from_string01("01")) ==
        Gf2Vector::from_string01("10101"));
  CHECK(Gf2Vector(0).concat(v) == v);

  // Slicing across a word boundary must reassemble the exact bit pattern.
  std::mt19937 gen(7);
  std::bernoulli_distribution bit(0.5);
  Gf2Vector big(150);
  for (std::size_t i = 0; i < big.size(); ++i) big.set(i, bit(gen));
  CHECK(big.slice(0, 70).concat(big.slice(70, 150)) == big);
  Gf2Vector mid = big.slice(60, 131);
  for (std::size_t i = 0; i < mid.size(); ++i) {
    CHECK(mid.get(i) == big.get(60 + i));
  }
}

TEST_CASE("vector hex encoding") {
  // Digit j covers bits [4j, 4j+4) with bit 4j in the nibble's low position.
  CHECK(Gf2Vector::from_string01("1").to_hex() == "1");
  CHECK(Gf2Vector::from_string01("0100").to_hex() == "2");
  CHECK(Gf2Vector::from_string01("10110001").to_hex() == "d8");
  CHECK(Gf2Vector::from_string01("11111").to_hex() == "f1");
  CHECK(Gf2Vector(0).to_hex().empty());
  CHECK(Gf2Vector(9).to_hex() == "000");
}

TEST_CASE("sparse matrix construction") {
  SparseGf2Matrix h = toy_matrix();
  CHECK(h.rows() == 3);
  CHECK(h.cols() == 6);
  CHECK(h.nnz() == 12);
  CHECK(h.row_support(0) == std::vector<std::uint32_t>{0, 2, 3, 5});
  CHECK(h.col_support(0) == std::vector<std::uint32_t>{0, 1});
  CHECK(h.at(0, 0));
  CHECK_FALSE(h.at(0, 1));
  CHECK(h.row_vector(2) == Gf2Vector::from_string01("011011"));

  SparseGf2Matrix same = SparseGf2Matrix::from_row_support(
      3, 6, {{5, 0, 3, 2}, {4, 1, 0, 3}, {2, 5, 1, 4}});
  CHECK(same == h);

  SparseGf2Matrix id = SparseGf2Matrix::identity(4);
  CHECK(id.rows() == 4);
  CHECK(id.nnz() == 4);
  CHECK(id.at(2, 2));
  CHECK_FALSE(id.at(2, 1));

  CHECK_THROWS_AS(SparseGf2Matrix(2, 2, {{0, 0}, {0, 0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(SparseGf2Matrix(2, 2, {{2, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(SparseGf2Matrix::from_dense({{1, 0}, {1}}),
                  std::invalid_argument);
}

TEST_CASE("transpose round trip") {
  SparseGf2Matrix h = toy_matrix();
  SparseGf2Matrix ht = h.transpose();
  CHECK(ht.rows() == 6);
  CHECK(ht.cols() == 3);
  for (std::size_t m = 0; m < h.rows(); ++m) {
    for (std::size_t n = 0; n < h.cols(); ++n) {
      CHECK(h.at(m, n) == ht.at(n, m));
    }
  }
  CHECK(ht.transpose() == h);
}

TEST_CASE("mat_vec_mul") {
  SparseGf2Matrix h = toy_matrix();
  CHECK(mat_vec_mul(h, Gf2Vector::from_string01("100000")) ==
        Gf2Vector::from_string01("110"));
  CHECK(mat_vec_mul(h, Gf2Vector(6)).is_zero());
  // Every row has even weight, so the all-ones vector lands on zero.
  CHECK(mat_vec_mul(h, Gf2Vector::from_string01("111111")).is_zero());
  CHECK_THROWS_AS(mat_vec_mul(h, Gf2Vector(5)), std::invalid_argument);

  // Linearity: H(u ^ v) == Hu ^ Hv on random inputs.
  std::mt19937 gen(11);
  std::bernoulli_distribution bit(0.5);
  for (int trial = 0; trial < 20; ++trial) {
    Gf2Vector u(6);
    Gf2Vector v(6);
    for (std::size_t i = 0; i < 6; ++i) {
      u.set(i, bit(gen));
      v.set(i, bit(gen));
    }
    CHECK(mat_vec_mul(h, u ^ v) == (mat_vec_mul(h, u) ^ mat_vec_mul(h, v)));
  }
}

TEST_CASE("rank") {
  CHECK(rank(SparseGf2Matrix::identity(4)) == 4);
  CHECK(rank(toy_matrix()) == 2);
  CHECK(rank(SparseGf2Matrix(3, 6, {})) == 0);

  std::mt19937 gen(23);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t rows = 1 + gen() % 12;
    const std::size_t cols = 1 + gen() % 12;
    auto dense = random_dense(gen, rows, cols, 0.4);
    SparseGf2Matrix h = SparseGf2Matrix::from_dense(dense);
    const std::size_t expected = dense_rank(dense);
    CHECK(rank(h) == expected);
    CHECK(rank(h.transpose()) == expected);
  }
}

TEST_CASE("row space membership") {
  SparseGf2Matrix h = toy_matrix();
  CHECK(in_row_space(h, Gf2Vector(6)));
  for (std::size_t m = 0; m < h.rows(); ++m) {
    CHECK(in_row_space(h, h.row_vector(m)));
  }
  CHECK_FALSE(in_row_space(h, Gf2Vector::from_string01("100001")));

  // Exhaustive agreement with the definition on all 64 candidates.
  const std::set<std::string> span = span_of_rows(h);
  CHECK(span.size() == 4);
  for (std::size_t mask = 0; mask < 64; ++mask) {
    Gf2Vector v(6);
    for (std::size_t i = 0; i < 6; ++i) v.set(i, (mask >> i) & 1);
    CHECK(in_row_space(h, v) == (span.count(v.to_string01()) > 0));
  }
}

TEST_CASE("row basis matches in_row_space") {
  std::mt19937 gen(31);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t rows = 1 + gen() % 8;
    const std::size_t cols = 2 + gen() % 9;
    SparseGf2Matrix h =
        SparseGf2Matrix::from_dense(random_dense(gen, rows, cols, 0.4));
    Gf2RowBasis basis(h);
    CHECK(basis.rank() == rank(h));
    CHECK(basis.cols() == cols);
    std::bernoulli_distribution bit(0.5);
    for (int probe = 0; probe < 40; ++probe) {
      Gf2Vector v(cols);
      for (std::size_t i = 0; i < cols; ++i) v.set(i, bit(gen));
      CHECK(basis.contains(v) == in_row_space(h, v));
    }
  }

  Gf2RowBasis basis(toy_matrix());
  CHECK_THROWS_AS(basis.contains(Gf2Vector(5)), std::invalid_argument);
}
