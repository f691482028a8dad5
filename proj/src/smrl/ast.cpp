#include "mst/smrl/ast.h"

namespace mst::smrl {

bool is_metamorphic_operator(const std::string& name) {
    return name == "IMPLIES" || name == "AND" || name == "OR" || name == "NOT" || name == "TRUE" ||
           name == "FALSE" || name == "CREATE" || name == "EQUAL";
}

bool is_metamorphic_expression(const Expr& e) {
    if (e.kind == ExprKind::Call) return is_metamorphic_operator(e.text);
    if (e.kind == ExprKind::BoolLit) return e.text == "TRUE" || e.text == "FALSE";
    return false;
}

namespace {

bool same_ptr(const ExprPtr& a, const ExprPtr& b) {
    if (!a || !b) return !a && !b;
    return same_structure(*a, *b);
}

bool same_ptr(const StmtPtr& a, const StmtPtr& b) {
    if (!a || !b) return !a && !b;
    return same_structure(*a, *b);
}

template <class T>
bool same_list(const std::vector<T>& a, const std::vector<T>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!same_ptr(a[i], b[i])) return false;
    return true;
}

}  // namespace

bool same_structure(const Expr& a, const Expr& b) {
    return a.kind == b.kind && a.text == b.text && a.int_value == b.int_value &&
           a.bool_value == b.bool_value && a.call_parens == b.call_parens && same_ptr(a.target, b.target) &&
           same_list(a.args, b.args);
}

bool same_structure(const Stmt& a, const Stmt& b) {
    return a.kind == b.kind && a.binder == b.binder && a.binder_type == b.binder_type &&
           same_ptr(a.iterable, b.iterable) && same_ptr(a.init, b.init) && same_ptr(a.cond, b.cond) &&
           same_ptr(a.update, b.update) && same_list(a.body, b.body) && same_ptr(a.expr, b.expr) &&
           a.meta_index == b.meta_index;
}

bool same_structure(const RelationAst& a, const RelationAst& b) {
    return a.package_name == b.package_name && a.name == b.name && a.flags == b.flags &&
           same_list(a.body, b.body);
}

}  // namespace mst::smrl
