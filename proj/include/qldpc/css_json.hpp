#pragma once

#include <string>

#include "qldpc/css_code.hpp"

namespace qldpc {

/// CSS code descriptor, JSON encoded:
///
///   {
///     "name": "bb72",
///     "params": {"n": 72, "k": 12, "d": 6},
///     "construction": {"bb": {"l": 6, "m": 6,
///                             "a_terms": [[3,0],[0,1],[0,2]],
///                             "b_terms": [[0,3],[1,0],[2,0]]}}
///   }
///
/// or, instead of "bb", {"alist_x": ..., "alist_z": ...} where each value is
/// either a file path or an inline alist payload (anything containing a
/// newline is treated as inline). "d" may be omitted when unknown.
///
/// Loading rebuilds the code and cross-checks the declared n and k against
/// the computed values; a mismatch is an error naming the violated
/// invariant. The declared d is stored as metadata, unverified. Relative
/// alist paths resolve against base_dir (the descriptor's own directory for
/// load_css_json_file).
CssCode load_css_json(const std::string& text, const std::string& base_dir = {});
CssCode load_css_json_file(const std::string& path);

/// Self-contained descriptor with inline alist payloads.
std::string save_css_json(const CssCode& code);
/// Descriptor referencing external alist files (paths written verbatim; the
/// files themselves are not created here).
std::string save_css_json(const CssCode& code, const std::string& alist_x_path,
                          const std::string& alist_z_path);
/// Descriptor carrying the bivariate bicycle construction parameters.
std::string save_css_json(const CssCode& code, const BbCodeSpec& spec);

}  // namespace qldpc
