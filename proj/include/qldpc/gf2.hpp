#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace qldpc {

/// Dense bit-packed binary vector over GF(2).
class Gf2Vector {
 public:
  Gf2Vector() = default;
  explicit Gf2Vector(std::size_t len) : len_(len), words_((len + 63) / 64, 0) {}

  static Gf2Vector from_bits(std::span<const int> bits);
  static Gf2Vector from_bits(std::initializer_list<int> bits);
  // Parses a "0101" string, most significant position first in reading order
  // (character i is bit i).
  static Gf2Vector from_string01(const std::string& text);

  std::size_t size() const { return len_; }

  bool get(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }

  void set(std::size_t i, bool value) {
    const std::uint64_t mask = std::uint64_t{1} << (i & 63);
    if (value) {
      words_[i >> 6] |= mask;
    } else {
      words_[i >> 6] &= ~mask;
    }
  }

  void flip(std::size_t i) { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

  std::size_t weight() const;
  bool is_zero() const;

  Gf2Vector& operator^=(const Gf2Vector& other);
  friend Gf2Vector operator^(Gf2Vector lhs, const Gf2Vector& rhs) {
    lhs ^= rhs;
    return lhs;
  }

  friend bool operator==(const Gf2Vector& a, const Gf2Vector& b) {
    return a.len_ == b.len_ && a.words_ == b.words_;
  }

  /// Bits [begin, end) as a new vector.
  Gf2Vector slice(std::size_t begin, std::size_t end) const;
  /// Concatenation: this followed by other.
  Gf2Vector concat(const Gf2Vector& other) const;

  std::string to_string01() const;
  // Hex digit j encodes bits [4j, 4j+4), bit 4j in the nibble's LSB.
  std::string to_hex() const;

  std::span<const std::uint64_t> words() const { return words_; }
  std::span<std::uint64_t> words() { return words_; }

 private:
  std::size_t len_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Sparse binary matrix stored as sorted row and column support lists.
/// Both supports are kept consistent; duplicate entries in the input are
/// rejected rather than XOR-folded.
class SparseGf2Matrix {
 public:
  using Entry = std::pair<std::uint32_t, std::uint32_t>;  // (row, col)

  SparseGf2Matrix() = default;
  SparseGf2Matrix(std::size_t rows, std::size_t cols,
                  std::span<const Entry> entries);
  SparseGf2Matrix(std::size_t rows, std::size_t cols,
                  std::initializer_list<Entry> entries);

  /// Builds from per-row column lists (need not be sorted; duplicates rejected).
  static SparseGf2Matrix from_row_support(
      std::size_t rows, std::size_t cols,
      const std::vector<std::vector<std::uint32_t>>& row_support);

  /// Builds from a dense 0/1 row-major description, one inner vector per row.
  static SparseGf2Matrix from_dense(
      const std::vector<std::vector<int>>& dense_rows);

  static SparseGf2Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nnz() const { return nnz_; }

  const std::vector<std::uint32_t>& row_support(std::size_t m) const {
    return row_support_[m];
  }
  const std::vector<std::uint32_t>& col_support(std::size_t n) const {
    return col_support_[n];
  }

  bool at(std::size_t m, std::size_t n) const;

  SparseGf2Matrix transpose() const;

  /// Row m as a bit-packed vector of length cols().
  Gf2Vector row_vector(std::size_t m) const;

  friend bool operator==(const SparseGf2Matrix& a, const SparseGf2Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ &&
           a.row_support_ == b.row_support_;
  }

 private:
  void build_col_support();

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t nnz_ = 0;
  std::vector<std::vector<std::uint32_t>> row_support_;
  std::vector<std::vector<std::uint32_t>> col_support_;
};

/// Syndrome map: s_m = XOR of v over the support of row m.
Gf2Vector mat_vec_mul(const SparseGf2Matrix& h, const Gf2Vector& v);

/// GF(2) row rank by Gaussian elimination on a bit-packed copy.
std::size_t rank(const SparseGf2Matrix& h);

/// True iff v is a GF(2) combination of rows of h, implemented as
/// rank(h) == rank(h with v appended).
bool in_row_space(const SparseGf2Matrix& h, const Gf2Vector& v);

/// Row-echelon basis of a matrix's row space, for repeated membership
/// queries without re-running elimination.
class Gf2RowBasis {
 public:
  explicit Gf2RowBasis(const SparseGf2Matrix& h);

  std::size_t rank() const { return pivot_cols_.size(); }
  std::size_t cols() const { return cols_; }

  bool contains(const Gf2Vector& v) const;

 private:
  std::size_t cols_ = 0;
  std::vector<std::size_t> pivot_cols_;
  std::vector<std::vector<std::uint64_t>> basis_rows_;
};

}  // namespace qldpc
