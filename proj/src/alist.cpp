#include "qldpc/alist.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace qldpc {

namespace {

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  // Next non-empty line split into non-negative integers.
  std::vector<long long> next_numbers(const char* what) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      std::istringstream fields(line);
      std::vector<long long> numbers;
      long long value = 0;
      while (fields >> value) {
        if (value < 0) fail(std::string("negative value in ") + what);
        numbers.push_back(value);
      }
      if (!fields.eof()) fail(std::string("non-numeric token in ") + what);
      if (!numbers.empty()) return numbers;
    }
    fail(std::string("unexpected end of file, expected ") + what);
    return {};
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw std::runtime_error("alist parse error at line " +
                             std::to_string(line_no_) + ": " + message);
  }

 private:
  std::istream& in_;
  std::size_t line_no_ = 0;
};

}  // namespace

SparseGf2Matrix load_alist(std::istream& in) {
  LineReader reader(in);

  const auto dims = reader.next_numbers("matrix dimensions N M");
  if (dims.size() != 2) reader.fail("expected exactly two values: N M");
  const std::size_t cols = static_cast<std::size_t>(dims[0]);
  const std::size_t rows = static_cast<std::size_t>(dims[1]);
  if (cols == 0 || rows == 0) reader.fail("dimensions must be positive");

  const auto max_degrees = reader.next_numbers("max degrees");
  if (max_degrees.size() != 2) {
    reader.fail("expected two values: max column degree, max row degree");
  }

  const auto col_degrees = reader.next_numbers("column degree list");
  if (col_degrees.size() != cols) {
    reader.fail("column degree list has " +
                std::to_string(col_degrees.size()) + " entries, expected " +
                std::to_string(cols));
  }
  const auto row_degrees = reader.next_numbers("row degree list");
  if (row_degrees.size() != rows) {
    reader.fail("row degree list has " + std::to_string(row_degrees.size()) +
                " entries, expected " + std::to_string(rows));
  }

  // Per-column lists: 1-based row indices; zero entries are padding.
  std::vector<std::vector<std::uint32_t>> col_support(cols);
  for (std::size_t n = 0; n < cols; ++n) {
    auto values = reader.next_numbers("column support list");
    std::vector<std::uint32_t> support;
    for (long long v : values) {
      if (v == 0) continue;
      if (v > static_cast<long long>(rows)) {
        reader.fail("row index " + std::to_string(v) + " out of range in "
                    "column " + std::to_string(n + 1));
      }
      support.push_back(static_cast<std::uint32_t>(v - 1));
    }
    if (support.size() != static_cast<std::size_t>(col_degrees[n])) {
      reader.fail("column " + std::to_string(n + 1) + " lists " +
                  std::to_string(support.size()) +
                  " entries but its declared degree is " +
                  std::to_string(col_degrees[n]));
    }
    col_support[n] = std::move(support);
  }

  std::vector<std::vector<std::uint32_t>> row_support(rows);
  for (std::size_t m = 0; m < rows; ++m) {
    auto values = reader.next_numbers("row support list");
    std::vector<std::uint32_t> support;
    for (long long v : values) {
      if (v == 0) continue;
      if (v > static_cast<long long>(cols)) {
        reader.fail("column index " + std::to_string(v) + " out of range in "
                    "row " + std::to_string(m + 1));
      }
      support.push_back(static_cast<std::uint32_t>(v - 1));
    }
    if (support.size() != static_cast<std::size_t>(row_degrees[m])) {
      reader.fail("row " + std::to_string(m + 1) + " lists " +
                  std::to_string(support.size()) +
                  " entries but its declared degree is " +
                  std::to_string(row_degrees[m]));
    }
    row_support[m] = std::move(support);
  }

  SparseGf2Matrix from_rows =
      SparseGf2Matrix::from_row_support(rows, cols, row_support);

  // Cross-check: the column block must describe the same matrix.
  for (std::size_t n = 0; n < cols; ++n) {
    auto declared = col_support[n];
    std::sort(declared.begin(), declared.end());
    if (declared != from_rows.col_support(n)) {
      throw std::runtime_error(
          "alist consistency error: column " + std::to_string(n + 1) +
          " support disagrees with the row support block");
    }
  }
  return from_rows;
}

SparseGf2Matrix load_alist(const std::string& text) {
  std::istringstream in(text);
  return load_alist(in);
}

SparseGf2Matrix load_alist_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open alist file: " + path);
  }
  return load_alist(in);
}

std::string save_alist(const SparseGf2Matrix& h) {
  std::ostringstream out;
  const std::size_t rows = h.rows();
  const std::size_t cols = h.cols();
  out << cols << " " << rows << "\n";

  std::size_t max_col = 0;
  std::size_t max_row = 0;
  for (std::size_t n = 0; n < cols; ++n) {
    max_col = std::max(max_col, h.col_support(n).size());
  }
  for (std::size_t m = 0; m < rows; ++m) {
    max_row = std::max(max_row, h.row_support(m).size());
  }
  out << max_col << " " << max_row << "\n";

  for (std::size_t n = 0; n < cols; ++n) {
    out << h.col_support(n).size() << (n + 1 == cols ? "\n" : " ");
  }
  for (std::size_t m = 0; m < rows; ++m) {
    out << h.row_support(m).size() << (m + 1 == rows ? "\n" : " ");
  }
  // An empty support is written as a lone padding zero; an empty line would
  // be skipped by the reader and desynchronize the list blocks.
  const auto write_support = [&out](const std::vector<std::uint32_t>& support) {
    if (support.empty()) {
      out << "0\n";
      return;
    }
    for (std::size_t i = 0; i < support.size(); ++i) {
      out << (support[i] + 1) << (i + 1 == support.size() ? "" : " ");
    }
    out << "\n";
  };
  for (std::size_t n = 0; n < cols; ++n) write_support(h.col_support(n));
  for (std::size_t m = 0; m < rows; ++m) write_support(h.row_support(m));
  return out.str();
}

void save_alist_file(const SparseGf2Matrix& h, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write alist file: " + path);
  }
  out << save_alist(h);
}

}  // namespace qldpc
