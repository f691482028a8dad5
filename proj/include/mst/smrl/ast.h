#pragma once

// Syntax tree for metamorphic relations. Trees are immutable after parsing
// and may be shared between threads.

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace mst::smrl {

struct SourcePos {
    int line = 0;
    int column = 0;
};

enum class ExprKind {
    IntLit,
    StrLit,
    BoolLit,   // true/false and the TRUE/FALSE operators
    NullLit,
    TypeName,  // Boolean, String, Int, ...
    Ident,
    Unary,     // text = "!" or "-"
    Binary,    // text = operator, args = {lhs, rhs}
    Call,      // text = function name, args
    Member,    // target.text, optional (args)
    New,       // new text(args)
    Cast,      // target as text
    Postfix,   // target ++/-- (text = "++"/"--")
    Assign,    // text = variable, target = value
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    ExprKind kind = ExprKind::NullLit;
    SourcePos pos;
    std::string text;
    std::int64_t int_value = 0;
    bool bool_value = false;
    ExprPtr target;
    std::vector<ExprPtr> args;
    bool call_parens = false;  // Member written with "(...)"
};

enum class StmtKind { ForEach, ForCounter, VarDecl, ExprStmt };

struct Stmt;
using StmtPtr = std::shared_ptr<const Stmt>;

struct Stmt {
    StmtKind kind = StmtKind::ExprStmt;
    SourcePos pos;
    // ForEach: binder_type (may be empty) binder : iterable
    std::string binder;
    std::string binder_type;
    ExprPtr iterable;
    // ForCounter: init ; cond ; update
    StmtPtr init;
    ExprPtr cond;
    ExprPtr update;
    std::vector<StmtPtr> body;
    // VarDecl: binder = expr; ExprStmt: expr
    ExprPtr expr;
    /// Ordinal of this statement among the relation's metamorphic
    /// expressions (textual order), or -1.
    int meta_index = -1;
};

struct RelationAst {
    std::string package_name;
    std::string name;
    std::map<std::string, bool> flags;
    std::vector<StmtPtr> body;
    SourcePos pos;
};

struct RelationFile {
    std::string package_name;
    std::vector<std::string> imports;
    std::vector<RelationAst> relations;
};

/// Operators whose statement-level use forms a metamorphic expression.
bool is_metamorphic_operator(const std::string& name);

/// True for an expression statement whose root is a metamorphic operator.
bool is_metamorphic_expression(const Expr& e);

/// Structural equality, ignoring source positions.
bool same_structure(const Expr& a, const Expr& b);
bool same_structure(const Stmt& a, const Stmt& b);
bool same_structure(const RelationAst& a, const RelationAst& b);

}  // namespace mst::smrl
