#include <sstream>

#include "mst/smrl/parser.h"

namespace mst::smrl {

namespace {

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (unsigned char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            case '\0': out += "\\0"; break;
            default:
                if (c < 0x20) {
                    static const char* hex = "0123456789abcdef";
                    out += "\\u00";
                    out += hex[c >> 4];
                    out += hex[c & 15];
                } else {
                    out += static_cast<char>(c);
                }
        }
    }
    return out + "\"";
}

// Operands that would re-associate when followed by ".x", "++" or "as T".
std::string tight(const Expr& e) {
    std::string s = print_expr(e);
    if (e.kind == ExprKind::Unary || e.kind == ExprKind::Cast || e.kind == ExprKind::Assign) return "(" + s + ")";
    return s;
}

std::string arg_list(const std::vector<ExprPtr>& args) {
    std::string out = "(";
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (i) out += ", ";
        out += print_expr(*args[i]);
    }
    return out + ")";
}

void print_stmt(std::ostringstream& os, const Stmt& s, int depth) {
    std::string ind(static_cast<std::size_t>(depth) * 2, ' ');
    switch (s.kind) {
        case StmtKind::VarDecl:
            os << ind << "var " << s.binder << " = " << print_expr(*s.expr) << ";\n";
            return;
        case StmtKind::ExprStmt:
            os << ind << print_expr(*s.expr) << ";\n";
            return;
        case StmtKind::ForEach:
            os << ind << "for (" << (s.binder_type.empty() ? std::string() : s.binder_type + " ") << s.binder
               << " : " << print_expr(*s.iterable) << ") {\n";
            break;
        case StmtKind::ForCounter:
            os << ind << "for (var " << s.init->binder << " = " << print_expr(*s.init->expr) << "; "
               << print_expr(*s.cond) << "; " << print_expr(*s.update) << ") {\n";
            break;
    }
    for (const auto& b : s.body) print_stmt(os, *b, depth + 1);
    os << ind << "}\n";
}

}  // namespace

std::string print_expr(const Expr& e) {
    switch (e.kind) {
        case ExprKind::IntLit: return std::to_string(e.int_value);
        case ExprKind::StrLit: return quote(e.text);
        case ExprKind::BoolLit: return e.text;
        case ExprKind::NullLit: return "null";
        case ExprKind::TypeName:
        case ExprKind::Ident: return e.text;
        case ExprKind::Unary: return e.text + tight(*e.target);
        case ExprKind::Binary:
            return "(" + print_expr(*e.args[0]) + " " + e.text + " " + print_expr(*e.args[1]) + ")";
        case ExprKind::Call: return e.text + arg_list(e.args);
        case ExprKind::Member:
            return tight(*e.target) + "." + e.text + (e.call_parens ? arg_list(e.args) : std::string());
        case ExprKind::New: return "new " + e.text + arg_list(e.args);
        case ExprKind::Cast: return tight(*e.target) + " as " + e.text;
        case ExprKind::Postfix: return tight(*e.target) + e.text;
        case ExprKind::Assign: return e.text + " = " + print_expr(*e.target);
    }
    return {};
}

std::string print_relation(const RelationAst& ast) {
    std::ostringstream os;
    if (!ast.package_name.empty()) os << "package " << ast.package_name << ";\n\n";
    os << "MR " << ast.name << " {\n{\n";
    for (const auto& s : ast.body) print_stmt(os, *s, 1);
    os << "}\n}\n";
    return os.str();
}

}  // namespace mst::smrl
