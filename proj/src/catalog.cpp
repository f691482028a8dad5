#include "mst/catalog.h"

#include <cctype>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "mst/smrl/parser.h"

namespace mst {

using smrl::Expr;
using smrl::ExprKind;

std::array<bool, 11> PatternVector::bits() const {
    return {user_precondition, action_precondition, same_user,        different_user,
            same_actions,      actions_subset,      added_actions,    modified_actions,
            verify_equality,   verify_difference,   verify_other_predicate};
}

PatternVector PatternVector::from_bits(const std::array<bool, 11>& b) {
    PatternVector v;
    v.user_precondition = b[0];
    v.action_precondition = b[1];
    v.same_user = b[2];
    v.different_user = b[3];
    v.same_actions = b[4];
    v.actions_subset = b[5];
    v.added_actions = b[6];
    v.modified_actions = b[7];
    v.verify_equality = b[8];
    v.verify_difference = b[9];
    v.verify_other_predicate = b[10];
    return v;
}

std::string PatternVector::to_string() const {
    std::string s;
    for (bool b : bits()) {
        if (!s.empty()) s += ',';
        s += b ? '1' : '0';
    }
    return s;
}

const std::vector<PatternRow>& pattern_table() {
    static const std::vector<PatternRow> rows = [] {
        const char* raw[] = {
            "11100001001", "01100001101", "01100010010", "01100001001", "01100001011", "11100001011",
            "11100001101", "01100001010", "10100001001", "11011000011", "01101000001", "00100010100",
            "11010100011", "01011001010", "01100100011", "01100101011", "01101000010", "01101001001",
            "11010001011", "11010010001", "11010100100", "11100100011", "11011000101",
        };
        std::vector<PatternRow> out;
        for (std::size_t i = 0; i < std::size(raw); ++i) {
            std::array<bool, 11> b{};
            for (std::size_t j = 0; j < 11; ++j) b[j] = raw[i][j] == '1';
            out.push_back({"P" + std::to_string(i + 1), PatternVector::from_bits(b)});
        }
        return out;
    }();
    return rows;
}

namespace {

std::string lower(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

std::string member_key(const std::string& name) {
    std::string k = lower(name);
    if (k.size() > 3 && k.rfind("get", 0) == 0) k = k.substr(3);
    return k;
}

template <class F>
bool any_expr(const Expr& e, const F& pred) {
    if (pred(e)) return true;
    if (e.target && any_expr(*e.target, pred)) return true;
    for (const auto& a : e.args)
        if (any_expr(*a, pred)) return true;
    return false;
}

template <class F>
bool any_in_stmts(const std::vector<smrl::StmtPtr>& body, const F& pred) {
    for (const auto& s : body) {
        for (const smrl::ExprPtr* p : {&s->iterable, &s->cond, &s->update, &s->expr})
            if (*p && any_expr(**p, pred)) return true;
        if (s->init && any_in_stmts(std::vector<smrl::StmtPtr>{s->init}, pred)) return true;
        if (any_in_stmts(s->body, pred)) return true;
    }
    return false;
}

const Expr* find_implies(const Expr& e) {
    if (e.kind == ExprKind::Call && e.text == "IMPLIES" && e.args.size() == 2) return &e;
    if (e.target)
        if (auto* f = find_implies(*e.target)) return f;
    for (const auto& a : e.args)
        if (auto* f = find_implies(*a)) return f;
    return nullptr;
}

const Expr* find_implies(const std::vector<smrl::StmtPtr>& body) {
    for (const auto& s : body) {
        if (s->expr)
            if (auto* f = find_implies(*s->expr)) return f;
        if (auto* f = find_implies(s->body)) return f;
    }
    return nullptr;
}

void conjuncts(const Expr& e, std::vector<const Expr*>& out) {
    if ((e.kind == ExprKind::Binary && e.text == "&&") || (e.kind == ExprKind::Call && e.text == "AND")) {
        for (const auto& a : e.args) conjuncts(*a, out);
        return;
    }
    out.push_back(&e);
}

bool is_input_ref(const Expr& e) { return e.kind == ExprKind::Call && e.text == "Input" && e.args.size() == 1; }

bool defines_followup(const Expr& e) {
    return e.kind == ExprKind::Call && (e.text == "CREATE" || e.text == "EQUAL") && !e.args.empty() &&
           is_input_ref(*e.args[0]);
}

bool is_call(const Expr& e, const char* name) { return e.kind == ExprKind::Call && e.text == name; }

bool refers_to_user(const Expr& e) {
    return any_expr(e, [](const Expr& x) {
        return is_call(x, "User") || (x.kind == ExprKind::Member && member_key(x.text) == "user");
    });
}

bool is_user_precondition(const Expr& e) {
    return any_expr(e, [](const Expr& x) {
        if (is_call(x, "User") || is_call(x, "isSupervisorOf")) return true;
        if (is_call(x, "notTried"))
            for (const auto& a : x.args)
                if (refers_to_user(*a)) return true;
        return false;
    });
}

bool input_constructor(const Expr& e) {
    if (!is_call(e, "Input") || e.args.empty()) return false;
    if (e.args.size() > 1) return true;
    auto k = e.args[0]->kind;
    return k == ExprKind::Call || k == ExprKind::Member || k == ExprKind::New;
}

const std::set<std::string>& predicate_keys() {
    static const std::set<std::string> keys = {
        "iserror",   "usercanretrievecontent", "hasalert",          "emptyfile",      "isemptyfile",
        "islogin",   "issignup",               "isresetpassword",  "afterlogin",     "issupervisorof",
        "cannotreachthroughgui", "nottried",   "isclickonbutton",  "containforminput",
    };
    return keys;
}

}  // namespace

Classification classify_pattern(const smrl::RelationAst& ast) {
    const Expr* implies = find_implies(ast.body);
    if (!implies) throw ClassificationError("relation " + ast.name + " has no implication");

    PatternVector v;
    std::vector<const Expr*> left;
    conjuncts(*implies->args[0], left);
    for (const Expr* c : left) {
        if (any_expr(*c, defines_followup)) break;
        if (c->kind == ExprKind::BoolLit || is_call(*c, "TRUE") || is_call(*c, "FALSE")) continue;
        if (is_user_precondition(*c))
            v.user_precondition = true;
        else
            v.action_precondition = true;
    }

    bool followup = any_in_stmts(ast.body, defines_followup);
    v.different_user = any_in_stmts(ast.body, [](const Expr& e) {
        return is_call(e, "changeCredentials") || is_call(e, "LoginAction");
    });
    v.same_user = followup && !v.different_user;
    v.actions_subset = any_in_stmts(ast.body, [](const Expr& e) {
        return input_constructor(e) || (e.kind == ExprKind::Member && member_key(e.text) == "sublist");
    });
    v.added_actions = any_in_stmts(ast.body, [](const Expr& e) {
        return is_call(e, "addAction") || is_call(e, "copyActionTo") ||
               (e.kind == ExprKind::Member && member_key(e.text) == "addaction");
    });
    v.modified_actions = any_in_stmts(ast.body, [](const Expr& e) {
        return e.kind == ExprKind::Member && e.call_parens && lower(e.text).rfind("set", 0) == 0;
    });
    v.same_actions = followup && !v.actions_subset && !v.added_actions && !v.modified_actions;

    const Expr& right = *implies->args[1];
    v.verify_equality = any_expr(right, [](const Expr& e) { return is_call(e, "EQUAL"); });
    v.verify_difference = any_expr(right, [](const Expr& e) { return is_call(e, "different"); });
    v.verify_other_predicate = any_expr(right, [](const Expr& e) {
        if (e.kind != ExprKind::Call && e.kind != ExprKind::Member) return false;
        return predicate_keys().count(member_key(e.text)) > 0;
    });

    Classification out;
    out.vector = v;
    for (const auto& row : pattern_table())
        if (row.vector == v) out.pattern_id = row.id;
    return out;
}

namespace {

std::string read_text(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw CatalogError("cannot read " + p.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

std::vector<CatalogEntry> load_relation_file(const std::string& path) {
    std::string text = read_text(path);
    smrl::RelationFile file;
    try {
        file = smrl::parse_relations(text);
    } catch (const std::exception& e) {
        throw CatalogError(path + ": " + e.what());
    }
    std::vector<CatalogEntry> out;
    for (auto& r : file.relations) {
        CatalogEntry e;
        e.name = r.name;
        e.file = std::filesystem::path(path).filename().string();
        e.source = text;
        e.ast = std::move(r);
        try {
            e.classification = classify_pattern(e.ast);
        } catch (const ClassificationError&) {
        }
        out.push_back(std::move(e));
    }
    return out;
}

std::vector<CatalogEntry> load_catalog(const std::string& dir) {
    std::filesystem::path base(dir);
    nlohmann::json manifest;
    try {
        manifest = nlohmann::json::parse(read_text(base / "manifest.json"));
    } catch (const nlohmann::json::exception& e) {
        throw CatalogError("manifest.json: " + std::string(e.what()));
    }
    std::vector<CatalogEntry> out;
    for (const auto& m : manifest.at("entries")) {
        std::string file = m.at("file").get<std::string>();
        std::string name = m.at("name").get<std::string>();
        auto entries = load_relation_file((base / file).string());
        bool found = false;
        for (auto& e : entries) {
            if (e.name != name) continue;
            e.weaknesses = m.value("weaknesses", std::vector<std::string>{});
            e.fixture_endpoints = m.value("fixture_endpoints", std::vector<std::string>{});
            out.push_back(std::move(e));
            found = true;
        }
        if (!found) throw CatalogError(file + " does not define " + name);
    }
    return out;
}

}  // namespace mst
