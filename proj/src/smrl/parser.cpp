#include "mst/smrl/parser.h"

#include <set>

#include "mst/smrl/analysis.h"

namespace mst::smrl {

namespace {

bool is_type_name(const std::string& s) {
    return s == "Boolean" || s == "String" || s == "Int" || s == "Integer" || s == "Long";
}

class Parser {
public:
    explicit Parser(const std::string& src) : toks_(tokenize(src)) {}

    RelationFile file() {
        RelationFile out;
        bool braced = false;
        while (peek_ident("import")) imports(out.imports);
        if (peek_ident("package")) {
            next();
            out.package_name = dotted();
            if (accept("{"))
                braced = true;
            else
                accept(";");
        }
        while (peek_ident("import")) imports(out.imports);

        std::set<std::string> names;
        while (peek_ident("MR")) {
            RelationAst r = relation();
            r.package_name = out.package_name;
            if (!names.insert(r.name).second)
                throw ParseError("duplicate MR name '" + r.name + "'", r.pos);
            out.relations.push_back(std::move(r));
        }
        if (out.relations.empty()) fail({"MR"});
        if (braced) expect("}");
        if (cur().kind != TokKind::End) fail({"MR", "end of input"});
        return out;
    }

private:
    std::vector<Token> toks_;
    std::size_t i_ = 0;
    int meta_counter_ = 0;

    const Token& cur() const { return toks_[i_]; }
    const Token& ahead(std::size_t n) const { return toks_[std::min(i_ + n, toks_.size() - 1)]; }
    const Token& next() { return toks_[i_ < toks_.size() - 1 ? i_++ : i_]; }

    bool peek(const char* punct, std::size_t n = 0) const {
        const Token& t = ahead(n);
        return t.kind == TokKind::Punct && t.text == punct;
    }
    bool peek_ident(const char* word, std::size_t n = 0) const {
        const Token& t = ahead(n);
        return t.kind == TokKind::Ident && t.text == word;
    }
    bool accept(const char* punct) {
        if (!peek(punct)) return false;
        next();
        return true;
    }

    [[noreturn]] void fail(std::vector<std::string> expected) const {
        const Token& t = cur();
        std::string got;
        switch (t.kind) {
            case TokKind::End: got = "end of input"; break;
            case TokKind::String: got = "string literal"; break;
            default: got = "'" + t.text + "'"; break;
        }
        throw ParseError("unexpected " + got, t.pos, std::move(expected));
    }

    void expect(const char* punct) {
        if (!accept(punct)) fail({std::string("'") + punct + "'"});
    }

    std::string ident() {
        if (cur().kind != TokKind::Ident) fail({"identifier"});
        return next().text;
    }

    std::string dotted() {
        std::string s = ident();
        while (peek(".") && ahead(1).kind == TokKind::Ident) {
            next();
            s += "." + next().text;
        }
        return s;
    }

    void imports(std::vector<std::string>& out) {
        next();
        std::string s;
        if (peek_ident("static") && ahead(1).kind == TokKind::Ident) {
            next();
            s = "static ";
        }
        s += ident();
        while (accept(".")) {
            if (accept("*")) {
                s += ".*";
                break;
            }
            s += "." + ident();
        }
        accept(";");
        out.push_back(s);
    }

    RelationAst relation() {
        RelationAst r;
        r.pos = cur().pos;
        next();  // MR
        r.name = ident();
        expect("{");
        expect("{");
        meta_counter_ = 0;
        while (!peek("}")) {
            if (cur().kind == TokKind::End) fail({"'}'"});
            auto s = statement();
            if (s->kind == StmtKind::ExprStmt && s->expr->kind == ExprKind::Assign &&
                is_known_flag(s->expr->text) && s->expr->target->kind == ExprKind::BoolLit)
                r.flags[s->expr->text] = s->expr->target->bool_value;
            r.body.push_back(std::move(s));
        }
        if (r.body.empty()) throw ParseError("empty body in MR '" + r.name + "'", r.pos);
        expect("}");
        expect("}");
        return r;
    }

    std::vector<StmtPtr> block() {
        std::vector<StmtPtr> body;
        if (accept("{")) {
            while (!accept("}")) {
                if (cur().kind == TokKind::End) fail({"'}'"});
                body.push_back(statement());
            }
        } else {
            body.push_back(statement());
        }
        return body;
    }

    StmtPtr statement() {
        if (peek_ident("for")) return for_statement();
        if (peek_ident("var")) {
            auto s = var_decl();
            accept(";");
            return s;
        }
        auto s = std::make_shared<Stmt>();
        s->pos = cur().pos;
        s->kind = StmtKind::ExprStmt;
        s->expr = assignment_or_expr();
        if (is_metamorphic_expression(*s->expr)) s->meta_index = meta_counter_++;
        accept(";");
        return s;
    }

    std::shared_ptr<Stmt> var_decl() {
        auto s = std::make_shared<Stmt>();
        s->pos = cur().pos;
        next();  // var
        s->kind = StmtKind::VarDecl;
        s->binder = ident();
        expect("=");
        s->expr = expr();
        return s;
    }

    ExprPtr assignment_or_expr() {
        if (cur().kind == TokKind::Ident && peek("=", 1)) {
            auto e = std::make_shared<Expr>();
            e->pos = cur().pos;
            e->kind = ExprKind::Assign;
            e->text = next().text;
            next();  // =
            e->target = expr();
            return e;
        }
        return expr();
    }

    // Type := IDENT ('.' IDENT)* ('<' Type (',' Type)* '>')?
    bool try_type(std::size_t& n, std::string& out) const {
        if (ahead(n).kind != TokKind::Ident) return false;
        out += ahead(n).text;
        ++n;
        while (peek(".", n) && ahead(n + 1).kind == TokKind::Ident) {
            out += "." + ahead(n + 1).text;
            n += 2;
        }
        if (peek("<", n)) {
            ++n;
            out += "<";
            if (!try_type(n, out)) return false;
            while (peek(",", n)) {
                ++n;
                out += ",";
                if (!try_type(n, out)) return false;
            }
            if (!peek(">", n)) return false;
            ++n;
            out += ">";
        }
        return true;
    }

    std::string type() {
        std::size_t n = 0;
        std::string t;
        if (!try_type(n, t)) fail({"type"});
        i_ += n;
        return t;
    }

    StmtPtr for_statement() {
        auto s = std::make_shared<Stmt>();
        s->pos = cur().pos;
        next();  // for
        expect("(");
        if (peek_ident("var") && ahead(1).kind == TokKind::Ident && peek(":", 2)) {
            next();
            s->kind = StmtKind::ForEach;
            s->binder = next().text;
            next();
            s->iterable = expr();
        } else if (peek_ident("var")) {
            s->kind = StmtKind::ForCounter;
            s->init = var_decl();
            expect(";");
            s->cond = expr();
            expect(";");
            s->update = assignment_or_expr();
        } else if (cur().kind == TokKind::Ident && peek(":", 1)) {
            s->kind = StmtKind::ForEach;
            s->binder = next().text;
            next();
            s->iterable = expr();
        } else {
            std::size_t n = 0;
            std::string t;
            if (!try_type(n, t) || ahead(n).kind != TokKind::Ident || !peek(":", n + 1))
                fail({"var", "type", "identifier"});
            i_ += n;
            s->kind = StmtKind::ForEach;
            s->binder_type = t;
            s->binder = next().text;
            next();
            s->iterable = expr();
        }
        expect(")");
        s->body = block();
        return s;
    }

    std::shared_ptr<Expr> node(ExprKind k, SourcePos pos) {
        auto e = std::make_shared<Expr>();
        e->kind = k;
        e->pos = pos;
        return e;
    }

    ExprPtr binary(const std::string& op, ExprPtr lhs, ExprPtr rhs, SourcePos pos) {
        auto e = node(ExprKind::Binary, pos);
        e->text = op;
        e->args = {std::move(lhs), std::move(rhs)};
        return e;
    }

    ExprPtr expr() { return or_expr(); }

    ExprPtr or_expr() {
        auto lhs = and_expr();
        while (peek("||")) {
            auto pos = next().pos;
            lhs = binary("||", lhs, and_expr(), pos);
        }
        return lhs;
    }

    ExprPtr and_expr() {
        auto lhs = eq_expr();
        while (peek("&&")) {
            auto pos = next().pos;
            lhs = binary("&&", lhs, eq_expr(), pos);
        }
        return lhs;
    }

    ExprPtr eq_expr() {
        auto lhs = rel_expr();
        while (peek("==") || peek("!=")) {
            auto t = next();
            lhs = binary(t.text, lhs, rel_expr(), t.pos);
        }
        return lhs;
    }

    ExprPtr rel_expr() {
        auto lhs = add_expr();
        while (peek("<") || peek(">") || peek("<=") || peek(">=")) {
            auto t = next();
            lhs = binary(t.text, lhs, add_expr(), t.pos);
        }
        return lhs;
    }

    ExprPtr add_expr() {
        auto lhs = mul_expr();
        while (peek("+") || peek("-")) {
            auto t = next();
            lhs = binary(t.text, lhs, mul_expr(), t.pos);
        }
        return lhs;
    }

    ExprPtr mul_expr() {
        auto lhs = unary();
        while (peek("*") || peek("/") || peek("%")) {
            auto t = next();
            lhs = binary(t.text, lhs, unary(), t.pos);
        }
        return lhs;
    }

    ExprPtr unary() {
        if (peek("!") || peek("-")) {
            auto t = next();
            auto e = node(ExprKind::Unary, t.pos);
            e->text = t.text;
            e->target = unary();
            return e;
        }
        return cast();
    }

    ExprPtr cast() {
        auto e = postfix();
        while (peek_ident("as")) {
            auto pos = next().pos;
            auto c = node(ExprKind::Cast, pos);
            c->target = e;
            c->text = type();
            e = c;
        }
        return e;
    }

    std::vector<ExprPtr> args() {
        std::vector<ExprPtr> out;
        expect("(");
        if (accept(")")) return out;
        out.push_back(expr());
        while (accept(",")) out.push_back(expr());
        expect(")");
        return out;
    }

    ExprPtr postfix() {
        ExprPtr e = primary();
        while (true) {
            if (peek(".")) {
                next();
                auto m = node(ExprKind::Member, cur().pos);
                m->target = e;
                m->text = ident();
                if (peek("(")) {
                    m->call_parens = true;
                    m->args = args();
                }
                e = m;
            } else if (peek("++") || peek("--")) {
                auto t = next();
                auto p = node(ExprKind::Postfix, t.pos);
                p->text = t.text;
                p->target = e;
                e = p;
            } else {
                return e;
            }
        }
    }

    ExprPtr primary() {
        const Token& t = cur();
        switch (t.kind) {
            case TokKind::Int: {
                auto e = node(ExprKind::IntLit, t.pos);
                e->int_value = t.int_value;
                next();
                return e;
            }
            case TokKind::String: {
                auto e = node(ExprKind::StrLit, t.pos);
                e->text = t.text;
                next();
                return e;
            }
            case TokKind::Punct:
                if (t.text == "(") {
                    next();
                    auto e = expr();
                    expect(")");
                    return e;
                }
                fail({"expression"});
            case TokKind::End: fail({"expression"});
            case TokKind::Ident: break;
        }

        SourcePos pos = t.pos;
        std::string name = next().text;
        if (name == "true" || name == "false" || name == "TRUE" || name == "FALSE") {
            auto e = node(ExprKind::BoolLit, pos);
            e->text = name;
            e->bool_value = name == "true" || name == "TRUE";
            // TRUE() / FALSE() call forms
            if ((name == "TRUE" || name == "FALSE") && peek("(") && peek(")", 1)) {
                next();
                next();
            }
            return e;
        }
        if (name == "null") return node(ExprKind::NullLit, pos);
        if (name == "new") {
            auto e = node(ExprKind::New, pos);
            e->text = type();
            e->args = args();
            return e;
        }
        if (peek("(")) {
            auto e = node(ExprKind::Call, pos);
            e->text = name;
            e->args = args();
            return e;
        }
        if (is_type_name(name)) {
            auto e = node(ExprKind::TypeName, pos);
            e->text = name;
            return e;
        }
        auto e = node(ExprKind::Ident, pos);
        e->text = name;
        return e;
    }
};

}  // namespace

RelationFile parse_relations(const std::string& source) {
    Parser p(source);
    RelationFile file = p.file();
    for (const auto& r : file.relations) static_check(r);
    return file;
}

RelationAst parse_relation(const std::string& source) {
    RelationFile file = parse_relations(source);
    if (file.relations.size() != 1)
        throw ParseError("expected exactly one MR, found " + std::to_string(file.relations.size()),
                         file.relations[1].pos);
    return std::move(file.relations.front());
}

}  // namespace mst::smrl
