#pragma once

#include <string>

#include "mst/smrl/ast.h"
#include "mst/smrl/lexer.h"

namespace mst::smrl {

/// Parses a whole .smrl file (one package, one or more MRs) and runs the
/// static checks on every relation. Throws ParseError.
RelationFile parse_relations(const std::string& source);

/// Parses a file that must contain exactly one MR.
RelationAst parse_relation(const std::string& source);

/// Canonical source text; parse(print(ast)) is structurally equal to ast.
std::string print_relation(const RelationAst& ast);
std::string print_expr(const Expr& e);

}  // namespace mst::smrl
