#pragma once

#include <iosfwd>
#include <string>

#include "qldpc/gf2.hpp"

namespace qldpc {

/// Parses the alist interchange format:
///   line 1: N M          (columns, rows)
///   line 2: max column degree, max row degree
///   line 3: N column degrees
///   line 4: M row degrees
///   then N per-column support lists and M per-row support lists of 1-based
///   indices. Zero padding entries are accepted and ignored.
/// Both support blocks are cross-checked against each other; any
/// inconsistency is reported with the offending line number.
SparseGf2Matrix load_alist(std::istream& in);
SparseGf2Matrix load_alist(const std::string& text);
SparseGf2Matrix load_alist_file(const std::string& path);

/// Canonical form: unpadded, single-space separated, one list per line.
/// load_alist(save_alist(h)) == h for any matrix.
std::string save_alist(const SparseGf2Matrix& h);
void save_alist_file(const SparseGf2Matrix& h, const std::string& path);

}  // namespace qldpc
