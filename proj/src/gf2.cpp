#include "qldpc/gf2.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace qldpc {

namespace {

std::string index_to_string(std::size_t i) { return std::to_string(i); }

}  // namespace

Gf2Vector Gf2Vector::from_bits(std::span<const int> bits) {
  Gf2Vector v(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] != 0 && bits[i] != 1) {
      throw std::invalid_argument("Gf2Vector bits must be 0 or 1");
    }
    if (bits[i]) v.set(i, true);
  }
  return v;
}

Gf2Vector Gf2Vector::from_bits(std::initializer_list<int> bits) {
  return from_bits(std::span<const int>(bits.begin(), bits.size()));
}

Gf2Vector Gf2Vector::from_string01(const std::string& text) {
  Gf2Vector v(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '1') {
      v.set(i, true);
    } else if (text[i] != '0') {
      throw std::invalid_argument("syndrome string may contain only 0 and 1");
    }
  }
  return v;
}

std::size_t Gf2Vector::weight() const {
  std::size_t w = 0;
  for (std::uint64_t word : words_) w += std::popcount(word);
  return w;
}

bool Gf2Vector::is_zero() const {
  for (std::uint64_t word : words_) {
    if (word != 0) return false;
  }
  return true;
}

Gf2Vector& Gf2Vector::operator^=(const Gf2Vector& other) {
  if (len_ != other.len_) {
    throw std::invalid_argument("Gf2Vector XOR length mismatch: " +
                                index_to_string(len_) + " vs " +
                                index_to_string(other.len_));
  }
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= other.words_[i];
  return *this;
}

Gf2Vector Gf2Vector::slice(std::size_t begin, std::size_t end) const {
  if (begin > end || end > len_) {
    throw std::invalid_argument("Gf2Vector slice out of range");
  }
  Gf2Vector out(end - begin);
  for (std::size_t i = begin; i < end; ++i) {
    if (get(i)) out.set(i - begin, true);
  }
  return out;
}

Gf2Vector Gf2Vector::concat(const Gf2Vector& other) const {
  Gf2Vector out(len_ + other.len_);
  for (std::size_t i = 0; i < len_; ++i) {
    if (get(i)) out.set(i, true);
  }
  for (std::size_t i = 0; i < other.len_; ++i) {
    if (other.get(i)) out.set(len_ + i, true);
  }
  return out;
}

std::string Gf2Vector::to_string01() const {
  std::string s(len_, '0');
  for (std::size_t i = 0; i < len_; ++i) {
    if (get(i)) s[i] = '1';
  }
  return s;
}

std::string Gf2Vector::to_hex() const {
  static const char* digits = "0123456789abcdef";
  const std::size_t ndigits = (len_ + 3) / 4;
  std::string s(ndigits, '0');
  for (std::size_t j = 0; j < ndigits; ++j) {
    unsigned nibble = 0;
    for (unsigned b = 0; b < 4; ++b) {
      const std::size_t i = 4 * j + b;
      if (i < len_ && get(i)) nibble |= 1u << b;
    }
    s[j] = digits[nibble];
  }
  return s;
}

SparseGf2Matrix::SparseGf2Matrix(std::size_t rows, std::size_t cols,
                                 std::span<const Entry> entries)
    : rows_(rows), cols_(cols), row_support_(rows) {
  for (const auto& [m, n] : entries) {
    if (m >= rows || n >= cols) {
      throw std::invalid_argument(
          "matrix entry (" + index_to_string(m) + ", " + index_to_string(n) +
          ") outside " + index_to_string(rows) + "x" + index_to_string(cols));
    }
    row_support_[m].push_back(n);
  }
  for (std::size_t m = 0; m < rows_; ++m) {
    auto& support = row_support_[m];
    std::sort(support.begin(), support.end());
    if (std::adjacent_find(support.begin(), support.end()) != support.end()) {
      throw std::invalid_argument("duplicate entry in matrix row " +
                                  index_to_string(m));
    }
    nnz_ += support.size();
  }
  build_col_support();
}

SparseGf2Matrix::SparseGf2Matrix(std::size_t rows, std::size_t cols,
                                 std::initializer_list<Entry> entries)
    : SparseGf2Matrix(rows, cols,
                      std::span<const Entry>(entries.begin(), entries.size())) {
}

SparseGf2Matrix SparseGf2Matrix::from_row_support(
    std::size_t rows, std::size_t cols,
    const std::vector<std::vector<std::uint32_t>>& row_support) {
  std::vector<Entry> entries;
  for (std::size_t m = 0; m < row_support.size(); ++m) {
    if (m >= rows) {
      throw std::invalid_argument("row support list longer than declared rows");
    }
    for (std::uint32_t n : row_support[m]) {
      entries.emplace_back(static_cast<std::uint32_t>(m), n);
    }
  }
  return SparseGf2Matrix(rows, cols, entries);
}

SparseGf2Matrix SparseGf2Matrix::from_dense(
    const std::vector<std::vector<int>>& dense_rows) {
  const std::size_t rows = dense_rows.size();
  const std::size_t cols = rows == 0 ? 0 : dense_rows[0].size();
  std::vector<Entry> entries;
  for (std::size_t m = 0; m < rows; ++m) {
    if (dense_rows[m].size() != cols) {
      throw std::invalid_argument("ragged dense matrix rows");
    }
    for (std::size_t n = 0; n < cols; ++n) {
      if (dense_rows[m][n]) {
        entries.emplace_back(static_cast<std::uint32_t>(m),
                             static_cast<std::uint32_t>(n));
      }
    }
  }
  return SparseGf2Matrix(rows, cols, entries);
}

SparseGf2Matrix SparseGf2Matrix::identity(std::size_t n) {
  std::vector<Entry> entries;
  entries.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    entries.emplace_back(static_cast<std::uint32_t>(i),
                         static_cast<std::uint32_t>(i));
  }
  return SparseGf2Matrix(n, n, entries);
}

void SparseGf2Matrix::build_col_support() {
  col_support_.assign(cols_, {});
  for (std::size_t m = 0; m < rows_; ++m) {
    for (std::uint32_t n : row_support_[m]) {
      col_support_[n].push_back(static_cast<std::uint32_t>(m));
    }
  }
  // Row-major construction emits each column's rows in increasing order.
}

bool SparseGf2Matrix::at(std::size_t m, std::size_t n) const {
  const auto& support = row_support_[m];
  return std::binary_search(support.begin(), support.end(),
                            static_cast<std::uint32_t>(n));
}

SparseGf2Matrix SparseGf2Matrix::transpose() const {
  SparseGf2Matrix t;
  t.rows_ = cols_;
  t.cols_ = rows_;
  t.nnz_ = nnz_;
  t.row_support_ = col_support_;
  t.col_support_ = row_support_;
  return t;
}

Gf2Vector SparseGf2Matrix::row_vector(std::size_t m) const {
  Gf2Vector v(cols_);
  for (std::uint32_t n : row_support_[m]) v.set(n, true);
  return v;
}

Gf2Vector mat_vec_mul(const SparseGf2Matrix& h, const Gf2Vector& v) {
  if (v.size() != h.cols()) {
    throw std::invalid_argument(
        "mat_vec_mul: vector length " + index_to_string(v.size()) +
        " does not match matrix columns " + index_to_string(h.cols()));
  }
  Gf2Vector s(h.rows());
  for (std::size_t m = 0; m < h.rows(); ++m) {
    unsigned bit = 0;
    for (std::uint32_t n : h.row_support(m)) bit ^= v.get(n) ? 1u : 0u;
    if (bit) s.set(m, true);
  }
  return s;
}

namespace {

// In-place elimination over bit-packed rows; returns the rank.
std::size_t eliminate(std::vector<std::vector<std::uint64_t>>& rows,
                      std::size_t cols) {
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
    const std::size_t word = c >> 6;
    const std::uint64_t mask = std::uint64_t{1} << (c & 63);
    std::size_t pivot = r;
    while (pivot < rows.size() && !(rows[pivot][word] & mask)) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[pivot], rows[r]);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i != r && (rows[i][word] & mask)) {
        for (std::size_t w = 0; w < rows[i].size(); ++w) {
          rows[i][w] ^= rows[r][w];
        }
      }
    }
    ++r;
  }
  return r;
}

std::vector<std::uint64_t> packed_row(const SparseGf2Matrix& h,
                                      std::size_t m, std::size_t words) {
  std::vector<std::uint64_t> row(words, 0);
  for (std::uint32_t n : h.row_support(m)) {
    row[n >> 6] |= std::uint64_t{1} << (n & 63);
  }
  return row;
}

}  // namespace

std::size_t rank(const SparseGf2Matrix& h) {
  const std::size_t words = (h.cols() + 63) / 64;
  std::vector<std::vector<std::uint64_t>> rows;
  rows.reserve(h.rows());
  for (std::size_t m = 0; m < h.rows(); ++m) {
    rows.push_back(packed_row(h, m, words));
  }
  return eliminate(rows, h.cols());
}

bool in_row_space(const SparseGf2Matrix& h, const Gf2Vector& v) {
  if (v.size() != h.cols()) {
    throw std::invalid_argument(
        "in_row_space: vector length " + index_to_string(v.size()) +
        " does not match matrix columns " + index_to_string(h.cols()));
  }
  const std::size_t words = (h.cols() + 63) / 64;
  std::vector<std::vector<std::uint64_t>> rows;
  rows.reserve(h.rows() + 1);
  for (std::size_t m = 0; m < h.rows(); ++m) {
    rows.push_back(packed_row(h, m, words));
  }
  const std::size_t base_rank = [&] {
    auto copy = rows;
    return eliminate(copy, h.cols());
  }();
  std::vector<std::uint64_t> extra(words, 0);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v.get(i)) extra[i >> 6] |= std::uint64_t{1} << (i & 63);
  }
  rows.push_back(std::move(extra));
  return eliminate(rows, h.cols()) == base_rank;
}

Gf2RowBasis::Gf2RowBasis(const SparseGf2Matrix& h) : cols_(h.cols()) {
  const std::size_t words = (cols_ + 63) / 64;
  std::vector<std::vector<std::uint64_t>> rows;
  rows.reserve(h.rows());
  for (std::size_t m = 0; m < h.rows(); ++m) {
    rows.push_back(packed_row(h, m, words));
  }
  const std::size_t r = eliminate(rows, cols_);
  basis_rows_.assign(rows.begin(), rows.begin() + r);
  for (const auto& row : basis_rows_) {
    for (std::size_t c = 0; c < cols_; ++c) {
      if (row[c >> 6] & (std::uint64_t{1} << (c & 63))) {
        pivot_cols_.push_back(c);
        break;
      }
    }
  }
}

bool Gf2RowBasis::contains(const Gf2Vector& v) const {
  if (v.size() != cols_) {
    throw std::invalid_argument("Gf2RowBasis: vector length mismatch");
  }
  std::vector<std::uint64_t> rem(v.words().begin(), v.words().end());
  rem.resize((cols_ + 63) / 64, 0);
  for (std::size_t i = 0; i < basis_rows_.size(); ++i) {
    const std::size_t c = pivot_cols_[i];
    if (rem[c >> 6] & (std::uint64_t{1} << (c & 63))) {
      for (std::size_t w = 0; w < rem.size(); ++w) {
        rem[w] ^= basis_rows_[i][w];
      }
    }
  }
  for (std::uint64_t word : rem) {
    if (word != 0) return false;
  }
  return true;
}

}  // namespace qldpc
