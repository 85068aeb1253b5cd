// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace qatp {

struct SourceSpan {
  std::size_t line = 0;
  std::size_t col = 0;
};

/// Node of a parsed s-expression: either an atom or a list.
struct SExpr {
  bool is_atom = false;
  std::string atom;
  std::vector<SExpr> items;
  SourceSpan span;

  bool is_list() const { return !is_atom; }
  /// True if this is a list whose head atom equals `name`.
  bool head_is(std::string_view name) const;
};

/// Parses every top-level form in `text`. `;` starts a comment to end of line.
std::vector<SExpr> parse_sexprs(std::string_view text);

/// Parses exactly one form; trailing non-comment text is an error.
SExpr parse_sexpr(std::string_view text);

std::string to_string(const SExpr& e);

}  // namespace qatp
