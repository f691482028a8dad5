#include "mst/smrl/analysis.h"

#include <algorithm>
#include <array>
#include <functional>
#include <utility>

#include "mst/smrl/lexer.h"

namespace mst::smrl {

namespace {

struct KindInfo {
    DataKind kind;
    std::string function;
    std::string catalog;  // empty when not a payload kind
    bool enumerable;
};

const std::vector<KindInfo>& kind_table() {
    static const std::vector<KindInfo> table = {
        {DataKind::Input, "Input", "", true},
        {DataKind::Action, "Action", "", true},
        {DataKind::ActionAvailableWithoutLogin, "ActionAvailableWithoutLogin", "", true},
        {DataKind::User, "User", "", true},
        {DataKind::ParameterValueUsedByOtherUsers, "ParameterValueUsedByOtherUsers", "", false},
        {DataKind::RandomFilePath, "RandomFilePath", "", true},
        {DataKind::RandomAdminFilePath, "RandomAdminFilePath", "", true},
        {DataKind::Log, "Log", "", true},
        {DataKind::HttpMethod, "HttpMethod", "HttpMethod", true},
        {DataKind::SQLInjectionString, "SQLInjectionString", "SQLInjection", true},
        {DataKind::CodeInjectionString, "CodeInjectionString", "CodeInjection", true},
        {DataKind::XSSInjectionString, "XSSInjectionString", "XSSInjection", true},
        {DataKind::StaticInjectionString, "StaticInjectionString", "StaticInjection", true},
        {DataKind::LDAPInjectionString, "LDAPInjectionString", "LDAPInjection", true},
        {DataKind::XQueryInjection, "XQueryInjection", "XQueryInjection", true},
        {DataKind::CommandInjection, "CommandInjection", "CommandInjection", true},
        {DataKind::CRLFAttackString, "CRLFAttackString", "CRLF", true},
        {DataKind::WeakPassword, "WeakPassword", "WeakPassword", true},
        {DataKind::SpecialCharacters, "SpecialCharacters", "SpecialCharacters", true},
        {DataKind::FileWithInvalidType, "FileWithInvalidType", "FileWithInvalidType", true},
        {DataKind::XMLInjectedFile, "XMLInjectedFile", "XMLInjectedFile", true},
        {DataKind::RandomValue, "RandomValue", "", true},
        {DataKind::Output, "Output", "", false},
    };
    return table;
}

const KindInfo& info(DataKind k) {
    for (const auto& i : kind_table())
        if (i.kind == k) return i;
    return kind_table().front();
}

const std::set<std::string>& utility_functions() {
    static const std::set<std::string> names = {
        "IMPLIES", "AND", "OR", "NOT", "TRUE", "FALSE", "CREATE", "EQUAL",
        "changeCredentials", "copyActionTo", "cannotReachThroughGUI", "isLogin", "isSignup", "afterLogin",
        "isResetPassword", "isClickOnButton", "containFormInput", "isSupervisorOf", "isError",
        "userCanRetrieveContent", "notTried", "EncodeUrl", "encodeUrl", "SCInjection_beginning", "typeOf",
        "different", "addAction", "parameterValuesUsedByOtherUsers", "LoginAction", "Wait", "hasAlert",
        "emptyFile", "println",
    };
    return names;
}

void walk(const Expr& e, const std::function<void(const Expr&)>& f) {
    f(e);
    if (e.target) walk(*e.target, f);
    for (const auto& a : e.args) walk(*a, f);
}

void walk(const Stmt& s, const std::function<void(const Expr&)>& f) {
    if (s.iterable) walk(*s.iterable, f);
    if (s.init) walk(*s.init, f);
    if (s.cond) walk(*s.cond, f);
    if (s.update) walk(*s.update, f);
    if (s.expr) walk(*s.expr, f);
    for (const auto& b : s.body) walk(*b, f);
}

class Checker {
public:
    void run(const RelationAst& r) {
        scopes_.emplace_back();
        for (const auto& s : r.body) stmt(*s, true);
    }

private:
    std::vector<std::set<std::string>> scopes_;

    bool bound(const std::string& n) const {
        for (const auto& s : scopes_)
            if (s.count(n)) return true;
        return false;
    }

    void stmt(const Stmt& s, bool top) {
        switch (s.kind) {
            case StmtKind::VarDecl:
                expr(*s.expr);
                scopes_.back().insert(s.binder);
                return;
            case StmtKind::ExprStmt:
                if (s.expr->kind == ExprKind::Assign) {
                    if (!(top && is_known_flag(s.expr->text)) && !bound(s.expr->text))
                        throw ParseError("assignment to undeclared variable '" + s.expr->text + "'", s.expr->pos);
                    expr(*s.expr->target);
                } else {
                    expr(*s.expr);
                }
                return;
            case StmtKind::ForEach:
                expr(*s.iterable);
                scopes_.emplace_back();
                scopes_.back().insert(s.binder);
                break;
            case StmtKind::ForCounter:
                scopes_.emplace_back();
                stmt(*s.init, false);
                expr(*s.cond);
                expr(*s.update);
                break;
        }
        scopes_.emplace_back();
        for (const auto& b : s.body) stmt(*b, false);
        scopes_.pop_back();
        scopes_.pop_back();
    }

    static void arity(const Expr& e, std::size_t lo, std::size_t hi) {
        if (e.args.size() < lo || e.args.size() > hi) {
            std::string want = lo == hi ? std::to_string(lo)
                               : hi == SIZE_MAX ? "at least " + std::to_string(lo)
                                                : std::to_string(lo) + ".." + std::to_string(hi);
            throw ParseError(e.text + " takes " + want + " argument(s), got " + std::to_string(e.args.size()),
                             e.pos);
        }
    }

    void expr(const Expr& e) {
        switch (e.kind) {
            case ExprKind::Ident:
                if (!bound(e.text)) throw ParseError("unbound variable '" + e.text + "'", e.pos);
                break;
            case ExprKind::Assign:
                if (!bound(e.text)) throw ParseError("assignment to undeclared variable '" + e.text + "'", e.pos);
                break;
            case ExprKind::Postfix:
                if (e.target->kind != ExprKind::Ident)
                    throw ParseError("'" + e.text + "' needs a variable", e.pos);
                break;
            case ExprKind::Call: {
                const std::string& n = e.text;
                if (!data_kind_from_function(n) && !is_known_function(n))
                    throw ParseError("unknown function '" + n + "'", e.pos);
                if (n == "IMPLIES" || n == "CREATE" || n == "EQUAL") arity(e, 2, 2);
                if (n == "NOT") arity(e, 1, 1);
                if (n == "AND" || n == "OR") arity(e, 2, SIZE_MAX);
                if (n == "Output") arity(e, 1, 2);
                if (n == "CREATE") {
                    const Expr& id = *e.args[0];
                    if (id.kind != ExprKind::Call || id.text != "Input" || id.args.size() != 1)
                        throw ParseError(n + " needs an Input(k) reference as first argument", id.pos);
                }
                break;
            }
            default: break;
        }
        if (e.target) expr(*e.target);
        for (const auto& a : e.args) expr(*a);
    }
};

}  // namespace

const std::string& function_name(DataKind k) { return info(k).function; }

std::optional<DataKind> data_kind_from_function(const std::string& name) {
    for (const auto& i : kind_table())
        if (i.function == name) return i.kind;
    return std::nullopt;
}

std::optional<std::string> payload_catalog_name(DataKind k) {
    const auto& i = info(k);
    if (i.catalog.empty()) return std::nullopt;
    return i.catalog;
}

std::optional<DataKind> data_kind_from_catalog(const std::string& catalog) {
    for (const auto& i : kind_table())
        if (!i.catalog.empty() && i.catalog == catalog) return i.kind;
    return std::nullopt;
}

bool is_enumerable(DataKind k) { return info(k).enumerable; }

std::vector<DataKind> canonical_order(const std::set<DataKind>& kinds) {
    std::vector<DataKind> out(kinds.begin(), kinds.end());
    auto rank = [](DataKind k) {
        if (k == DataKind::Input) return 0;
        if (k == DataKind::User) return 1;
        return 2;
    };
    std::sort(out.begin(), out.end(), [&](DataKind a, DataKind b) {
        if (rank(a) != rank(b)) return rank(a) < rank(b);
        return function_name(a) < function_name(b);
    });
    return out;
}

std::set<DataKind> extract_source_input_types(const RelationAst& ast) {
    std::set<DataKind> out;
    auto f = [&](const Expr& e) {
        if (e.kind != ExprKind::Call) return;
        if (auto k = data_kind_from_function(e.text)) out.insert(*k);
    };
    for (const auto& s : ast.body) walk(*s, f);
    return out;
}

bool is_known_function(const std::string& name) {
    return utility_functions().count(name) > 0 || data_kind_from_function(name).has_value();
}

bool is_known_flag(const std::string& name) { return name == "keepDialogsOpen"; }

void static_check(const RelationAst& ast) { Checker().run(ast); }

}  // namespace mst::smrl
