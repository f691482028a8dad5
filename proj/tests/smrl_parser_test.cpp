#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "mst/smrl/analysis.h"
#include "mst/smrl/parser.h"
#include "support.h"

using namespace mst::smrl;

namespace {

std::string read_catalog(const std::string& file) {
    std::ifstream in(mst::testing::catalog_dir() + "/" + file);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void flatten_and(const Expr& e, std::vector<const Expr*>& out) {
    if ((e.kind == ExprKind::Binary && e.text == "&&") || (e.kind == ExprKind::Call && e.text == "AND")) {
        for (const auto& a : e.args) flatten_and(*a, out);
        return;
    }
    out.push_back(&e);
}

std::set<std::string> kind_names(const RelationAst& ast) {
    std::set<std::string> out;
    for (auto k : extract_source_input_types(ast)) out.insert(function_name(k));
    return out;
}

ParseError parse_error_of(const std::string& src) {
    try {
        parse_relations(src);
    } catch (const ParseError& e) {
        return e;
    }
    ADD_FAILURE() << "no parse error for: " << src;
    return ParseError("", {});
}

}  // namespace

TEST(Lexer, TokenKindsAndPositions) {
    auto toks = tokenize("MR X {\n  var s = \"a\\\"b\"; x++ && y != 3 // tail\n}");
    ASSERT_GE(toks.size(), 4u);
    EXPECT_EQ(toks[0].kind, TokKind::Ident);
    EXPECT_EQ(toks[0].pos.line, 1);
    bool saw_string = false, saw_ne = false;
    for (const auto& t : toks) {
        if (t.kind == TokKind::String) {
            saw_string = true;
            EXPECT_EQ(t.text, "a\"b");
            EXPECT_EQ(t.pos.line, 2);
        }
        if (t.kind == TokKind::Punct && t.text == "!=") saw_ne = true;
    }
    EXPECT_TRUE(saw_string);
    EXPECT_TRUE(saw_ne);
    EXPECT_EQ(toks.back().kind, TokKind::End);
}

TEST(Lexer, UnterminatedStringIsError) { EXPECT_THROW(tokenize("var s = \"open"), ParseError); }

TEST(Parser, BypassAuthorizationShape) {
    RelationAst ast = parse_relation(read_catalog("CWE_266_OTG_AUTHZ_002.smrl"));
    EXPECT_EQ(ast.package_name, "smrl.mr.owasp");
    EXPECT_EQ(ast.name, "CWE_266_OTG_AUTHZ_002");
    ASSERT_EQ(ast.body.size(), 1u);
    const Stmt& loop = *ast.body[0];
    EXPECT_EQ(loop.kind, StmtKind::ForEach);
    EXPECT_EQ(loop.binder, "action");
    const Stmt* implies = nullptr;
    for (const auto& s : loop.body)
        if (s->kind == StmtKind::ExprStmt && s->expr->kind == ExprKind::Call && s->expr->text == "IMPLIES")
            implies = s.get();
    ASSERT_NE(implies, nullptr);
    EXPECT_EQ(implies->meta_index, 0);
    std::vector<const Expr*> left;
    flatten_and(*implies->expr->args[0], left);
    EXPECT_EQ(left.size(), 4u);
}

TEST(Parser, KeepDialogsOpenFlag) {
    RelationAst ast = parse_relation(read_catalog("CWE_79_a_XSSreflected.smrl"));
    ASSERT_TRUE(ast.flags.count("keepDialogsOpen"));
    EXPECT_TRUE(ast.flags.at("keepDialogsOpen"));
}

TEST(Parser, EmptyBodyRejected) {
    ParseError e = parse_error_of("MR X {{ }}");
    EXPECT_NE(e.message().find("empty body"), std::string::npos);
}

TEST(Parser, SyntaxErrorCarriesPositionAndExpected) {
    ParseError e = parse_error_of("package p;\nMR X {{\n  IMPLIES(TRUE, TRUE;\n}}");
    EXPECT_EQ(e.pos().line, 3);
    EXPECT_GT(e.pos().column, 0);
    EXPECT_FALSE(e.expected().empty());
}

TEST(Parser, DuplicateNamesRejected) {
    ParseError e = parse_error_of("MR A {{ IMPLIES(TRUE, TRUE); }} MR A {{ IMPLIES(TRUE, TRUE); }}");
    EXPECT_NE(e.message().find("duplicate"), std::string::npos);
}

TEST(Parser, MultipleRelationsAndImports) {
    RelationFile f = parse_relations(
        "package a.b;\nimport static x.y.*;\nMR A {{ IMPLIES(TRUE, TRUE); }}\nMR B {{ var x = 1; IMPLIES(x == 1, TRUE) }}");
    EXPECT_EQ(f.package_name, "a.b");
    EXPECT_EQ(f.imports.size(), 1u);
    ASSERT_EQ(f.relations.size(), 2u);
    EXPECT_EQ(f.relations[1].package_name, "a.b");
    EXPECT_THROW(parse_relation("MR A {{ TRUE; }} MR B {{ TRUE; }}"), ParseError);
}

TEST(Parser, CounterLoopAndCast) {
    RelationAst ast = parse_relation(
        "MR C {{ for (var y = Input(1).actions().size() - 1; y > 0; y--) {"
        " var s = Output(Input(1), y).session as CookieSession; IMPLIES(TRUE, s != null); } }}");
    ASSERT_EQ(ast.body.size(), 1u);
    EXPECT_EQ(ast.body[0]->kind, StmtKind::ForCounter);
    EXPECT_EQ(ast.body[0]->update->kind, ExprKind::Postfix);
}

TEST(StaticCheck, UnboundVariable) {
    ParseError e = parse_error_of("MR X {{ IMPLIES(nothing, TRUE); }}");
    EXPECT_NE(e.message().find("unbound"), std::string::npos);
}

TEST(StaticCheck, UnknownFunction) {
    ParseError e = parse_error_of("MR X {{ IMPLIES(frobnicate(1), TRUE); }}");
    EXPECT_NE(e.message().find("unknown function"), std::string::npos);
}

TEST(StaticCheck, OperatorArities) {
    EXPECT_THROW(parse_relations("MR X {{ IMPLIES(TRUE); }}"), ParseError);
    EXPECT_THROW(parse_relations("MR X {{ IMPLIES(TRUE, NOT(TRUE, FALSE)); }}"), ParseError);
    EXPECT_THROW(parse_relations("MR X {{ IMPLIES(TRUE, AND(TRUE)); }}"), ParseError);
    EXPECT_THROW(parse_relations("MR X {{ IMPLIES(TRUE, OR(FALSE)); }}"), ParseError);
    EXPECT_NO_THROW(parse_relations("MR X {{ IMPLIES(TRUE, OR(FALSE, FALSE, TRUE)); }}"));
}

TEST(StaticCheck, CreateNeedsInputReference) {
    EXPECT_THROW(parse_relations("MR X {{ IMPLIES(CREATE(User(), Input(1)), TRUE); }}"), ParseError);
    EXPECT_NO_THROW(parse_relations("MR X {{ IMPLIES(CREATE(Input(2), Input(1)), TRUE); }}"));
}

TEST(Extraction, CatalogKinds) {
    EXPECT_EQ(kind_names(parse_relation(read_catalog("CWE_266_OTG_AUTHZ_002.smrl"))),
              (std::set<std::string>{"Input", "User", "Output"}));
    EXPECT_EQ(kind_names(parse_relation(read_catalog("CWE_287a_425_OTG_AUTHN_001.smrl"))),
              (std::set<std::string>{"Input", "Output"}));
    EXPECT_TRUE(kind_names(parse_relation("MR T {{ TRUE; }}")).empty());
}

TEST(Extraction, NestedCallsFound) {
    auto kinds = kind_names(parse_relation(
        "MR N {{ IMPLIES(TRUE, different(EncodeUrl(SQLInjectionString()), RandomFilePath())); }}"));
    EXPECT_EQ(kinds, (std::set<std::string>{"SQLInjectionString", "RandomFilePath"}));
}

TEST(CanonicalOrder, InputThenUserThenAlphabetical) {
    auto order = canonical_order({DataKind::XSSInjectionString, DataKind::User, DataKind::Action, DataKind::Input,
                                  DataKind::CRLFAttackString});
    std::vector<std::string> names;
    for (auto k : order) names.push_back(function_name(k));
    EXPECT_EQ(names, (std::vector<std::string>{"Input", "User", "Action", "CRLFAttackString", "XSSInjectionString"}));
}

TEST(Printer, RoundTripOnCatalog) {
    for (const auto& entry : std::filesystem::directory_iterator(mst::testing::catalog_dir())) {
        if (entry.path().extension() != ".smrl") continue;
        RelationFile f = parse_relations(read_catalog(entry.path().filename().string()));
        for (const auto& r : f.relations) {
            std::string printed = print_relation(r);
            RelationAst again = parse_relation(printed);
            EXPECT_TRUE(same_structure(r, again)) << r.name << "\n" << printed;
            EXPECT_EQ(print_relation(again), printed);
        }
    }
}

TEST(MetaIndex, NumberedInTextualOrder) {
    RelationAst ast = parse_relation("MR M {{ var a = 1; IMPLIES(TRUE, TRUE); for (var i = 0; i < 2; i++) { "
                                     "OR(TRUE, FALSE); } TRUE; }}");
    EXPECT_EQ(ast.body[0]->meta_index, -1);
    EXPECT_EQ(ast.body[1]->meta_index, 0);
    EXPECT_EQ(ast.body[2]->body[0]->meta_index, 1);
    EXPECT_EQ(ast.body[3]->meta_index, 2);
}
