#include "mst/smrl/interpreter.h"

#include <algorithm>
#include <cctype>
#include <map>

#include "mst/smrl/analysis.h"
#include "mst/url.h"

namespace mst::smrl {

EvalError::EvalError(const std::string& message, SourcePos pos)
    : std::runtime_error(std::to_string(pos.line) + ":" + std::to_string(pos.column) + ": " + message), pos_(pos) {}

std::string value_type_name(const Value& v) {
    struct Namer {
        std::string operator()(std::monostate) const { return "null"; }
        std::string operator()(bool) const { return "Boolean"; }
        std::string operator()(std::int64_t) const { return "Int"; }
        std::string operator()(const std::string&) const { return "String"; }
        std::string operator()(const TypeNameV&) const { return "Type"; }
        std::string operator()(const SeqRefV&) const { return "Input"; }
        std::string operator()(const ActionRefV&) const { return "Action"; }
        std::string operator()(const ActionListV&) const { return "ActionList"; }
        std::string operator()(const UserV&) const { return "User"; }
        std::string operator()(const OutputV&) const { return "Output"; }
        std::string operator()(const SessionV&) const { return "Session"; }
        std::string operator()(const EntryV&) const { return "Entry"; }
        std::string operator()(const ListV&) const { return "List"; }
    };
    return std::visit(Namer{}, v.v);
}

namespace {

std::string lower(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

// Member names are matched case-insensitively, with a leading "get"
// dropped, so `x.getSession()`, `x.session` and `x.Session` coincide.
std::string member_key(const std::string& name) {
    std::string k = lower(name);
    if (k.size() > 3 && k.rfind("get", 0) == 0) k = k.substr(3);
    if (k == "isemptyfile") k = "emptyfile";
    return k;
}

std::string canonical_type(const std::string& name) {
    if (name == "Integer" || name == "Long" || name == "Int") return "Int";
    return name;
}

std::shared_ptr<InputSequence> standalone(Action a) {
    return std::make_shared<InputSequence>(make_sequence({std::move(a)}, Origin::Derived));
}

struct ViolationSignal {
    Violation violation;
};

class Interp {
public:
    Interp(const RelationAst& ast, EvalEnv& env) : ast_(ast), env_(env) {}

    Verdict run() {
        scopes_.emplace_back();
        try {
            for (const auto& s : ast_.body) exec(*s, 0);
        } catch (ViolationSignal& sig) {
            Verdict v;
            v.holds = false;
            v.violation = std::move(sig.violation);
            return v;
        }
        return {};
    }

private:
    const RelationAst& ast_;
    EvalEnv& env_;
    std::vector<std::map<std::string, Value>> scopes_;
    std::map<std::int64_t, std::shared_ptr<InputSequence>> registry_;
    std::map<std::int64_t, std::shared_ptr<InputSequence>> sources_;
    // notTried keys queried since the last implication whose premise held
    std::vector<std::vector<std::string>> pending_tried_;
    std::vector<LoggedOutput> log_;
    std::int64_t iterations_ = 0;

    // ---- statements -------------------------------------------------------

    void exec(const Stmt& s, int loop_depth) {
        switch (s.kind) {
            case StmtKind::VarDecl: scopes_.back()[s.binder] = eval(*s.expr); return;
            case StmtKind::ExprStmt: exec_expr(s); return;
            case StmtKind::ForEach: exec_foreach(s, loop_depth); return;
            case StmtKind::ForCounter: exec_counter(s, loop_depth); return;
        }
    }

    void exec_expr(const Stmt& s) {
        const Expr& e = *s.expr;
        if (e.kind == ExprKind::Assign && !lookup_ptr(e.text) && is_known_flag(e.text)) return;
        if (s.meta_index < 0) {
            eval(e);
            return;
        }
        if (s.meta_index == 0) registry_.clear();
        log_.clear();
        if (!as_bool(eval(e), e.pos)) throw ViolationSignal{make_violation(s)};
    }

    Violation make_violation(const Stmt& s) const {
        Violation v;
        v.expression_index = s.meta_index;
        v.pos = s.pos;
        v.context = log_;
        for (const auto& [k, seq] : sources_) v.sources.push_back(std::make_shared<const InputSequence>(*seq));
        for (const auto& [k, seq] : registry_) v.follow_ups.push_back(std::make_shared<const InputSequence>(*seq));
        return v;
    }

    void tick(SourcePos pos) {
        if (++iterations_ > env_.max_iterations) throw EvalError("loop iteration limit exceeded", pos);
        if (env_.should_stop && env_.should_stop()) throw EvalError("time budget exhausted", pos);
    }

    void begin_iteration(int loop_depth) {
        if (loop_depth != 0) return;
        registry_.clear();
        pending_tried_.clear();
    }

    void end_iteration(int loop_depth) {
        if (loop_depth != 0) return;
        registry_.clear();
        if (env_.on_outer_iteration_end) env_.on_outer_iteration_end(registry_.size());
    }

    void run_body(const Stmt& s, int loop_depth) {
        scopes_.emplace_back();
        for (const auto& b : s.body) exec(*b, loop_depth + 1);
        scopes_.pop_back();
    }

    std::vector<Value> materialize(const Value& v, SourcePos pos) {
        std::vector<Value> items;
        if (auto* l = std::get_if<ActionListV>(&v.v)) {
            for (std::size_t i = l->from; i < l->to; ++i) items.push_back(ActionRefV{l->seq, i});
        } else if (auto* s = std::get_if<SeqRefV>(&v.v)) {
            for (std::size_t i = 0; i < s->seq->actions.size(); ++i) items.push_back(ActionRefV{s->seq, i});
        } else if (auto* list = std::get_if<ListV>(&v.v)) {
            items = *list->items;
        } else {
            throw EvalError("cannot iterate over " + value_type_name(v), pos);
        }
        return items;
    }

    void exec_foreach(const Stmt& s, int loop_depth) {
        auto items = materialize(eval(*s.iterable), s.iterable->pos);
        for (auto& item : items) {
            tick(s.pos);
            begin_iteration(loop_depth);
            scopes_.emplace_back();
            scopes_.back()[s.binder] = std::move(item);
            run_body(s, loop_depth);
            scopes_.pop_back();
            end_iteration(loop_depth);
        }
    }

    void exec_counter(const Stmt& s, int loop_depth) {
        scopes_.emplace_back();
        exec(*s.init, loop_depth + 1);
        while (true) {
            tick(s.pos);
            if (!as_bool(eval(*s.cond), s.cond->pos)) break;
            begin_iteration(loop_depth);
            run_body(s, loop_depth);
            end_iteration(loop_depth);
            eval(*s.update);
        }
        scopes_.pop_back();
    }

    // ---- variables -------------------------------------------------------

    Value* lookup_ptr(const std::string& name) {
        for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
            auto f = it->find(name);
            if (f != it->end()) return &f->second;
        }
        return nullptr;
    }

    Value& lookup(const std::string& name, SourcePos pos) {
        if (Value* v = lookup_ptr(name)) return *v;
        throw EvalError("unbound variable '" + name + "'", pos);
    }

    // ---- conversions -----------------------------------------------------

    static bool as_bool(const Value& v, SourcePos pos) {
        if (auto* b = std::get_if<bool>(&v.v)) return *b;
        throw EvalError("expected Boolean, got " + value_type_name(v), pos);
    }

    static std::int64_t as_int(const Value& v, SourcePos pos) {
        if (auto* i = std::get_if<std::int64_t>(&v.v)) return *i;
        throw EvalError("expected Int, got " + value_type_name(v), pos);
    }

    static std::size_t as_index(const Value& v, SourcePos pos) {
        auto i = as_int(v, pos);
        if (i < 0) throw EvalError("negative index " + std::to_string(i), pos);
        return static_cast<std::size_t>(i);
    }

    static std::string as_text(const Value& v, SourcePos pos) {
        if (auto* s = std::get_if<std::string>(&v.v)) return *s;
        if (auto* i = std::get_if<std::int64_t>(&v.v)) return std::to_string(*i);
        if (auto* b = std::get_if<bool>(&v.v)) return *b ? "true" : "false";
        if (auto* t = std::get_if<TypeNameV>(&v.v)) return t->name;
        throw EvalError("expected String, got " + value_type_name(v), pos);
    }

    std::string key_text(const Value& v, SourcePos pos) {
        if (auto* u = std::get_if<UserV>(&v.v)) return "user:" + u->user.username;
        if (std::holds_alternative<ActionRefV>(v.v)) return full_url(action_of(v, pos));
        return as_text(v, pos);
    }

    static const User& as_user(const Value& v, SourcePos pos) {
        if (auto* u = std::get_if<UserV>(&v.v)) return u->user;
        throw EvalError("expected User, got " + value_type_name(v), pos);
    }

    static std::shared_ptr<const WebOutput> as_output(const Value& v, SourcePos pos) {
        if (auto* o = std::get_if<OutputV>(&v.v)) return o->out;
        throw EvalError("expected Output, got " + value_type_name(v), pos);
    }

    static std::shared_ptr<InputSequence> as_seq(const Value& v, SourcePos pos) {
        if (auto* s = std::get_if<SeqRefV>(&v.v)) return s->seq;
        if (auto* l = std::get_if<ActionListV>(&v.v)) {
            std::vector<Action> acts(l->seq->actions.begin() + static_cast<std::ptrdiff_t>(l->from),
                                     l->seq->actions.begin() + static_cast<std::ptrdiff_t>(l->to));
            return std::make_shared<InputSequence>(make_sequence(std::move(acts), Origin::Derived));
        }
        throw EvalError("expected Input, got " + value_type_name(v), pos);
    }

    static Action& action_of(const Value& v, SourcePos pos) {
        auto* r = std::get_if<ActionRefV>(&v.v);
        if (!r) throw EvalError("expected Action, got " + value_type_name(v), pos);
        if (r->index >= r->seq->actions.size())
            throw EvalError("action position " + std::to_string(r->index) + " no longer exists", pos);
        return r->seq->actions[r->index];
    }

    // Marks an in-place change. A mutated source copy becomes a derived
    // sequence with its own identity so cached outputs of the original are
    // never reused for it.
    static void touch(InputSequence& seq) {
        ++seq.revision;
        if (seq.origin != Origin::Derived) {
            seq.source_id = seq.id;
            seq.id = next_sequence_id("m");
            seq.origin = Origin::Derived;
        }
    }

    bool values_equal(const Value& a, const Value& b) const {
        const auto& x = a.v;
        const auto& y = b.v;
        if (x.index() == y.index()) {
            if (std::holds_alternative<std::monostate>(x)) return true;
            if (auto* p = std::get_if<bool>(&x)) return *p == std::get<bool>(y);
            if (auto* p = std::get_if<std::int64_t>(&x)) return *p == std::get<std::int64_t>(y);
            if (auto* p = std::get_if<std::string>(&x)) return *p == std::get<std::string>(y);
            if (auto* p = std::get_if<TypeNameV>(&x))
                return canonical_type(p->name) == canonical_type(std::get<TypeNameV>(y).name);
            if (auto* p = std::get_if<UserV>(&x)) return p->user.username == std::get<UserV>(y).user.username;
            if (auto* p = std::get_if<OutputV>(&x)) return outputs_equal(*p->out, *std::get<OutputV>(y).out, env_.web);
            if (auto* p = std::get_if<SessionV>(&x)) return *p->session == *std::get<SessionV>(y).session;
            if (auto* p = std::get_if<EntryV>(&x)) {
                const auto& q = std::get<EntryV>(y);
                return p->key == q.key && p->value == q.value;
            }
            if (auto* p = std::get_if<SeqRefV>(&x)) return p->seq->same_actions(*std::get<SeqRefV>(y).seq);
            if (std::holds_alternative<ActionRefV>(x)) return action_of(a, {}) == action_of(b, {});
            if (auto* p = std::get_if<ListV>(&x)) {
                const auto& q = *std::get<ListV>(y).items;
                if (p->items->size() != q.size()) return false;
                for (std::size_t i = 0; i < q.size(); ++i)
                    if (!values_equal((*p->items)[i], q[i])) return false;
                return true;
            }
            return false;
        }
        auto text_vs_type = [](const std::string& s, const TypeNameV& t) {
            return type_of(s) == canonical_type(t.name);
        };
        if (auto* s = std::get_if<std::string>(&x))
            if (auto* t = std::get_if<TypeNameV>(&y)) return text_vs_type(*s, *t);
        if (auto* t = std::get_if<TypeNameV>(&x))
            if (auto* s = std::get_if<std::string>(&y)) return text_vs_type(*s, *t);
        return false;
    }

    // ---- expressions -----------------------------------------------------

    Value eval(const Expr& e) {
        switch (e.kind) {
            case ExprKind::IntLit: return e.int_value;
            case ExprKind::StrLit: return e.text;
            case ExprKind::BoolLit: return e.bool_value;
            case ExprKind::NullLit: return Value{};
            case ExprKind::TypeName: return TypeNameV{e.text};
            case ExprKind::Ident: return lookup(e.text, e.pos);
            case ExprKind::Unary: {
                Value v = eval(*e.target);
                if (e.text == "!") return !as_bool(v, e.pos);
                return -as_int(v, e.pos);
            }
            case ExprKind::Binary: return binary(e);
            case ExprKind::Call: return call(e);
            case ExprKind::Member: return member(e);
            case ExprKind::New: return construct(e);
            case ExprKind::Cast: return eval(*e.target);
            case ExprKind::Postfix: {
                Value& var = lookup(e.target->text, e.pos);
                std::int64_t old = as_int(var, e.pos);
                var = e.text == "++" ? old + 1 : old - 1;
                return old;
            }
            case ExprKind::Assign: {
                Value v = eval(*e.target);
                lookup(e.text, e.pos) = v;
                return v;
            }
        }
        throw EvalError("unsupported expression", e.pos);
    }

    Value binary(const Expr& e) {
        const std::string& op = e.text;
        if (op == "&&") {
            if (!as_bool(eval(*e.args[0]), e.args[0]->pos)) return false;
            return as_bool(eval(*e.args[1]), e.args[1]->pos);
        }
        if (op == "||") {
            if (as_bool(eval(*e.args[0]), e.args[0]->pos)) return true;
            return as_bool(eval(*e.args[1]), e.args[1]->pos);
        }
        Value l = eval(*e.args[0]);
        Value r = eval(*e.args[1]);
        if (op == "==") return values_equal(l, r);
        if (op == "!=") return !values_equal(l, r);
        if (op == "+" && (std::holds_alternative<std::string>(l.v) || std::holds_alternative<std::string>(r.v)))
            return as_text(l, e.pos) + as_text(r, e.pos);
        std::int64_t a = as_int(l, e.args[0]->pos);
        std::int64_t b = as_int(r, e.args[1]->pos);
        if (op == "<") return a < b;
        if (op == ">") return a > b;
        if (op == "<=") return a <= b;
        if (op == ">=") return a >= b;
        if (op == "+") return a + b;
        if (op == "-") return a - b;
        if (op == "*") return a * b;
        if (op == "/" || op == "%") {
            if (b == 0) throw EvalError("division by zero", e.pos);
            return op == "/" ? a / b : a % b;
        }
        throw EvalError("unknown operator '" + op + "'", e.pos);
    }

    std::vector<Value> eval_args(const Expr& e) {
        std::vector<Value> out;
        out.reserve(e.args.size());
        for (const auto& a : e.args) out.push_back(eval(*a));
        return out;
    }

    void need_args(const Expr& e, const std::vector<Value>& args, std::size_t lo, std::size_t hi) const {
        if (args.size() < lo || args.size() > hi)
            throw EvalError(e.text + ": wrong number of arguments (" + std::to_string(args.size()) + ")", e.pos);
    }

    // ---- follow-up inputs ----------------------------------------------

    std::shared_ptr<InputSequence> resolve_input(std::int64_t k, SourcePos pos) {
        auto r = registry_.find(k);
        if (r != registry_.end()) return r->second;
        if (k < 1) throw EvalError("Input index must be at least 1", pos);
        auto& src = sources_[k];
        if (!src) {
            try {
                src = std::make_shared<InputSequence>(*env_.provider.input(k));
            } catch (const DataError& err) {
                sources_.erase(k);
                throw EvalError(err.what(), pos);
            }
        }
        return src;
    }

    static bool is_input_ref(const Expr& e) {
        return e.kind == ExprKind::Call && e.text == "Input" && e.args.size() == 1;
    }

    // EQUAL(Input(k), x) binds or compares a follow-up input; with any
    // other first argument it is plain equality.
    Value define_followup(const Expr& e) {
        if (e.text == "EQUAL" && !is_input_ref(*e.args[0])) return values_equal(eval(*e.args[0]), eval(*e.args[1]));
        const Expr& id = *e.args[0];
        std::int64_t k = as_int(eval(*id.args[0]), id.pos);
        auto value = as_seq(eval(*e.args[1]), e.args[1]->pos);
        bool in_registry = registry_.count(k) > 0;
        bool is_source = sources_.count(k) > 0;
        if (e.text == "CREATE" || (!in_registry && !is_source)) {
            if (in_registry || is_source) return false;
            registry_[k] = std::make_shared<InputSequence>(clone_input(*value));
            return true;
        }
        const auto& bound = in_registry ? registry_[k] : sources_[k];
        return bound->same_actions(*value);
    }

    // ---- calls -----------------------------------------------------------

    Value output_call(const Expr& e) {
        auto seq = as_seq(eval(*e.args[0]), e.args[0]->pos);
        if (e.args.size() == 1) {
            auto items = std::make_shared<ValueList>();
            for (std::size_t i = 0; i < seq->actions.size(); ++i) items->push_back(observe(seq, i));
            return ListV{items};
        }
        std::int64_t i = as_int(eval(*e.args[1]), e.args[1]->pos);
        if (i < 0 || static_cast<std::size_t>(i) >= seq->actions.size()) {
            // Positions past the end observe a failed request instead of
            // aborting, so guards such as !isError(Output(..., x+1)) hold.
            auto missing = std::make_shared<WebOutput>();
            log_.push_back({std::make_shared<const InputSequence>(*seq), static_cast<std::size_t>(std::max<std::int64_t>(i, 0)),
                            missing, seq->origin == Origin::Derived});
            return OutputV{missing};
        }
        return observe(seq, static_cast<std::size_t>(i));
    }

    Value observe(const std::shared_ptr<InputSequence>& seq, std::size_t i) {
        auto out = env_.executor.output_of(*seq, i);
        log_.push_back({std::make_shared<const InputSequence>(*seq), i, out, seq->origin == Origin::Derived});
        return OutputV{out};
    }

    void collect_actions(const Value& v, std::vector<Action>& out, SourcePos pos) {
        if (std::holds_alternative<ActionRefV>(v.v)) {
            out.push_back(action_of(v, pos));
        } else if (auto* l = std::get_if<ActionListV>(&v.v)) {
            for (std::size_t i = l->from; i < l->to; ++i) out.push_back(l->seq->actions[i]);
        } else if (auto* s = std::get_if<SeqRefV>(&v.v)) {
            out.insert(out.end(), s->seq->actions.begin(), s->seq->actions.end());
        } else if (auto* list = std::get_if<ListV>(&v.v)) {
            for (const auto& item : *list->items) collect_actions(item, out, pos);
        } else {
            throw EvalError("cannot build an Input from " + value_type_name(v), pos);
        }
    }

    Value input_call(const Expr& e) {
        if (e.args.empty()) return SeqRefV{resolve_input(1, e.pos)};
        Value first = eval(*e.args[0]);
        if (e.args.size() == 1 && std::holds_alternative<std::int64_t>(first.v))
            return SeqRefV{resolve_input(std::get<std::int64_t>(first.v), e.pos)};
        std::vector<Action> actions;
        collect_actions(first, actions, e.args[0]->pos);
        for (std::size_t i = 1; i < e.args.size(); ++i) collect_actions(eval(*e.args[i]), actions, e.args[i]->pos);
        return SeqRefV{std::make_shared<InputSequence>(make_sequence(std::move(actions), Origin::Derived))};
    }

    std::int64_t data_index(const Expr& e) {
        if (e.args.empty()) return 1;
        return as_int(eval(*e.args[0]), e.args[0]->pos);
    }

    Value data_call(const Expr& e, DataKind kind) {
        const auto& p = env_.provider;
        try {
            switch (kind) {
                case DataKind::Input: return input_call(e);
                case DataKind::Output: return output_call(e);
                case DataKind::User: return UserV{p.user(data_index(e))};
                case DataKind::Action:
                case DataKind::ActionAvailableWithoutLogin:
                    return ActionRefV{standalone(p.action(kind, data_index(e))), 0};
                case DataKind::ParameterValueUsedByOtherUsers: {
                    if (e.args.size() < 2 || e.args.size() > 3)
                        throw EvalError(e.text + " takes (action, par[, i])", e.pos);
                    auto args = eval_args(e);
                    auto values = parameter_values_used_by_other_users(p.crawl(), action_of(args[0], e.pos),
                                                                       as_index(args[1], e.pos));
                    std::int64_t i = args.size() == 3 ? as_int(args[2], e.pos) : 1;
                    if (values.empty()) throw EvalError("no data for kind " + e.text, e.pos);
                    if (i < 1) throw EvalError(e.text + " index must be at least 1", e.pos);
                    return values[static_cast<std::size_t>(i - 1) % values.size()];
                }
                case DataKind::RandomValue: {
                    if (e.args.size() != 1) throw EvalError("RandomValue takes a type name", e.pos);
                    Value t = eval(*e.args[0]);
                    auto* tn = std::get_if<TypeNameV>(&t.v);
                    if (!tn) throw EvalError("RandomValue takes a type name", e.pos);
                    auto r = p.random_value(tn->name);
                    return std::visit([](auto x) { return Value(x); }, r);
                }
                default: return p.text(kind, data_index(e));
            }
        } catch (const DataError& err) {
            throw EvalError(err.what(), e.pos);
        } catch (const PositionError& err) {
            throw EvalError(err.what(), e.pos);
        }
    }

    Value call(const Expr& e) {
        const std::string& n = e.text;
        if (n == "IMPLIES") {
            if (!as_bool(eval(*e.args[0]), e.args[0]->pos)) return true;
            for (const auto& k : pending_tried_) env_.tried.mark(k);
            pending_tried_.clear();
            return as_bool(eval(*e.args[1]), e.args[1]->pos);
        }
        if (n == "AND") {
            for (const auto& a : e.args)
                if (!as_bool(eval(*a), a->pos)) return false;
            return true;
        }
        if (n == "OR") {
            for (const auto& a : e.args)
                if (as_bool(eval(*a), a->pos)) return true;
            return false;
        }
        if (n == "NOT") return !as_bool(eval(*e.args.at(0)), e.pos);
        if (n == "TRUE") return true;
        if (n == "FALSE") return false;
        if (n == "CREATE" || n == "EQUAL") return define_followup(e);
        if (auto kind = data_kind_from_function(n)) return data_call(e, *kind);
        try {
            return utility(e, eval_args(e));
        } catch (const PositionError& err) {
            throw EvalError(err.what(), e.pos);
        } catch (const std::invalid_argument& err) {
            throw EvalError(err.what(), e.pos);
        }
    }

    Value utility(const Expr& e, const std::vector<Value>& a) {
        const std::string& n = e.text;
        const WebConfig& web = env_.web;
        SourcePos pos = e.pos;
        if (n == "changeCredentials") {
            need_args(e, a, 2, 2);
            return SeqRefV{std::make_shared<InputSequence>(change_credentials(*as_seq(a[0], pos), as_user(a[1], pos), web))};
        }
        if (n == "copyActionTo") {
            need_args(e, a, 3, 3);
            return SeqRefV{std::make_shared<InputSequence>(
                copy_action_to(*as_seq(a[0], pos), as_index(a[1], pos), as_index(a[2], pos)))};
        }
        if (n == "addAction") {
            need_args(e, a, 3, 3);
            return SeqRefV{std::make_shared<InputSequence>(
                add_action(*as_seq(a[0], pos), as_index(a[1], pos), action_of(a[2], pos)))};
        }
        if (n == "cannotReachThroughGUI") {
            need_args(e, a, 2, 2);
            return cannot_reach_through_gui(env_.provider.crawl(), as_user(a[0], pos), key_text(a[1], pos));
        }
        if (n == "userCanRetrieveContent") {
            need_args(e, a, 2, 2);
            return user_can_retrieve_content(env_.provider.crawl(), as_user(a[0], pos), *as_output(a[1], pos), web);
        }
        if (n == "isSupervisorOf") {
            need_args(e, a, 2, 2);
            return is_supervisor_of(as_user(a[0], pos), as_user(a[1], pos), web);
        }
        if (n == "isLogin") return need_args(e, a, 1, 1), is_login(action_of(a[0], pos), web);
        if (n == "isSignup") return need_args(e, a, 1, 1), is_signup(action_of(a[0], pos), web);
        if (n == "isResetPassword") return need_args(e, a, 1, 1), is_reset_password(action_of(a[0], pos), web);
        if (n == "isClickOnButton") return need_args(e, a, 1, 1), is_click_on_button(action_of(a[0], pos));
        if (n == "containFormInput") return need_args(e, a, 1, 1), contain_form_input(action_of(a[0], pos));
        if (n == "afterLogin") {
            need_args(e, a, 1, 1);
            action_of(a[0], pos);
            const auto& r = std::get<ActionRefV>(a[0].v);
            return after_login(*r.seq, r.index, web);
        }
        if (n == "isError") return need_args(e, a, 1, 1), is_error(*as_output(a[0], pos), web);
        if (n == "hasAlert") return need_args(e, a, 1, 1), as_output(a[0], pos)->has_alert;
        if (n == "emptyFile") return need_args(e, a, 1, 1), as_output(a[0], pos)->is_empty_file();
        if (n == "notTried") {
            if (a.empty()) throw EvalError("notTried needs at least one key", pos);
            std::vector<std::string> keys;
            for (const auto& v : a) keys.push_back(key_text(v, pos));
            if (env_.tried.contains(keys)) return false;
            pending_tried_.push_back(std::move(keys));
            return true;
        }
        if (n == "EncodeUrl" || n == "encodeUrl") return need_args(e, a, 1, 1), encode_url(as_text(a[0], pos));
        if (n == "SCInjection_beginning") {
            need_args(e, a, 2, 2);
            return special_char_injection_beginning(as_text(a[0], pos), as_text(a[1], pos));
        }
        if (n == "typeOf") return need_args(e, a, 1, 1), TypeNameV{type_of(as_text(a[0], pos))};
        if (n == "different") return need_args(e, a, 2, 2), !values_equal(a[0], a[1]);
        if (n == "parameterValuesUsedByOtherUsers") {
            need_args(e, a, 2, 2);
            auto items = std::make_shared<ValueList>();
            for (auto& v : parameter_values_used_by_other_users(env_.provider.crawl(), action_of(a[0], pos),
                                                                as_index(a[1], pos)))
                items->push_back(std::move(v));
            return ListV{items};
        }
        if (n == "LoginAction") {
            need_args(e, a, 1, 1);
            auto tmpl = env_.provider.login_template();
            if (!tmpl) throw EvalError("no login action in the collected data", pos);
            auto seq = change_credentials(make_sequence({*tmpl}, Origin::Derived), as_user(a[0], pos), web);
            return ActionRefV{std::make_shared<InputSequence>(std::move(seq)), 0};
        }
        if (n == "Wait") return need_args(e, a, 1, 1), ActionRefV{standalone(Action::wait(as_int(a[0], pos))), 0};
        if (n == "println") return true;
        throw EvalError("unknown function '" + n + "'", pos);
    }

    Value construct(const Expr& e) {
        auto a = eval_args(e);
        std::string t = e.text.substr(e.text.find_last_of('.') == std::string::npos ? 0 : e.text.find_last_of('.') + 1);
        if (t == "Cookie" || t.rfind("Entry", 0) == 0) {
            need_args(e, a, 2, 2);
            return EntryV{as_text(a[0], e.pos), as_text(a[1], e.pos)};
        }
        if (t == "ResetSUTAction") return ActionRefV{standalone(Action::reset_sut()), 0};
        if (t == "WaitAction") {
            need_args(e, a, 1, 1);
            return ActionRefV{standalone(Action::wait(as_int(a[0], e.pos))), 0};
        }
        throw EvalError("cannot construct '" + e.text + "'", e.pos);
    }

    // ---- members ---------------------------------------------------------

    Value member(const Expr& e) {
        Value target = eval(*e.target);
        auto args = eval_args(e);
        std::string k = member_key(e.text);
        try {
            return member_of(e, target, k, args);
        } catch (const PositionError& err) {
            throw EvalError(err.what(), e.pos);
        } catch (const std::invalid_argument& err) {
            throw EvalError(err.what(), e.pos);
        }
    }

    [[noreturn]] static void no_member(const Expr& e, const Value& target) {
        throw EvalError(value_type_name(target) + " has no member '" + e.text + "'", e.pos);
    }

    static Value entries_list(const Params& params) {
        auto items = std::make_shared<ValueList>();
        for (const auto& [k, v] : params) items->push_back(EntryV{k, v});
        return ListV{items};
    }

    Value member_of(const Expr& e, const Value& target, const std::string& k, const std::vector<Value>& a) {
        SourcePos pos = e.pos;
        const WebConfig& web = env_.web;

        if (auto* l = std::get_if<ActionListV>(&target.v)) {
            std::size_t n = l->to - l->from;
            if (k == "size" || k == "length") return static_cast<std::int64_t>(n);
            if (k == "isempty") return n == 0;
            if (k == "get") {
                need_args(e, a, 1, 1);
                std::size_t i = as_index(a[0], pos);
                if (i >= n) throw EvalError("action index " + std::to_string(i) + " outside [0, " + std::to_string(n) + ")", pos);
                return ActionRefV{l->seq, l->from + i};
            }
            if (k == "sublist") {
                need_args(e, a, 2, 2);
                std::size_t from = as_index(a[0], pos);
                std::size_t to = as_index(a[1], pos);
                if (from > to || to > n) throw PositionError("subList", to, n);
                return ActionListV{l->seq, l->from + from, l->from + to};
            }
            no_member(e, target);
        }

        if (auto* s = std::get_if<SeqRefV>(&target.v)) {
            if (k == "actions") return ActionListV{s->seq, 0, s->seq->actions.size()};
            if (k == "size" || k == "length") return static_cast<std::int64_t>(s->seq->actions.size());
            if (k == "addaction") {
                need_args(e, a, 2, 2);
                insert_action(*s->seq, as_index(a[0], pos), action_of(a[1], pos));
                touch(*s->seq);
                return true;
            }
            if (k == "get") {
                need_args(e, a, 1, 1);
                std::size_t i = as_index(a[0], pos);
                if (i >= s->seq->actions.size()) throw PositionError("get", i, s->seq->actions.size());
                return ActionRefV{s->seq, i};
            }
            no_member(e, target);
        }

        if (auto* r = std::get_if<ActionRefV>(&target.v)) {
            Action& act = action_of(target, pos);
            if (k == "position") return static_cast<std::int64_t>(r->index);
            if (k == "url") return full_url(act);
            if (k == "method") return act.method;
            if (k == "user") return UserV{act.user};
            if (k == "elementurl") return act.element_url;
            if (k == "channel") return to_string(act.channel);
            if (k == "parameters") return entries_list(act.parameters);
            if (k == "forminputs") return entries_list(act.form_inputs);
            if (k == "parametervalue" || k == "forminputvalue") {
                need_args(e, a, 1, 1);
                const Params& ps = k == "parametervalue" ? act.parameters : act.form_inputs;
                std::size_t i = as_index(a[0], pos);
                if (i >= ps.size()) throw PositionError(e.text, i, ps.size());
                return ps[i].second;
            }
            if (k == "setparametervalue" || k == "setforminput") {
                need_args(e, a, 2, 2);
                std::size_t i = as_index(a[0], pos);
                bool ok = k == "setparametervalue" ? act.set_parameter_value(i, as_text(a[1], pos))
                                                   : act.set_form_input(i, as_text(a[1], pos));
                if (ok) touch(*r->seq);
                return ok;
            }
            if (k == "setchannel") {
                need_args(e, a, 1, 1);
                act.set_channel(channel_from_string(as_text(a[0], pos)));
                touch(*r->seq);
                return true;
            }
            if (k == "setsession") {
                need_args(e, a, 1, 1);
                auto* sv = std::get_if<SessionV>(&a[0].v);
                if (!sv) throw EvalError("setSession expects a Session", pos);
                act.set_session(*sv->session);
                touch(*r->seq);
                return true;
            }
            if (k == "isclickonbutton") return is_click_on_button(act);
            if (k == "containforminput") return contain_form_input(act);
            if (k == "islogin") return is_login(act, web);
            if (k == "issignup") return is_signup(act, web);
            if (k == "isresetpassword") return is_reset_password(act, web);
            if (k == "afterlogin") return after_login(*r->seq, r->index, web);
            if (k == "kind") return to_string(act.kind);
            no_member(e, target);
        }

        if (auto* u = std::get_if<UserV>(&target.v)) {
            if (k == "username") return u->user.username;
            if (k == "password") return u->user.password;
            if (k == "role") return u->user.role;
            if (k == "id") return u->user.id;
            no_member(e, target);
        }

        if (auto* o = std::get_if<OutputV>(&target.v)) {
            if (k == "session") return SessionV{std::make_shared<Session>(o->out->session)};
            if (k == "iserror") return is_error(*o->out, web);
            if (k == "emptyfile") return o->out->is_empty_file();
            if (k == "hasalert") return o->out->has_alert;
            if (k == "status") return static_cast<std::int64_t>(o->out->status);
            if (k == "body" || k == "text" || k == "content") return o->out->body;
            no_member(e, target);
        }

        if (auto* s = std::get_if<SessionV>(&target.v)) {
            if (k == "keyvaluemappings" || k == "cookies") return entries_list(s->session->cookies());
            if (k == "size") return static_cast<std::int64_t>(s->session->cookies().size());
            if (k == "setcookie") {
                if (a.size() == 1) {
                    auto* en = std::get_if<EntryV>(&a[0].v);
                    if (!en) throw EvalError("setCookie expects a Cookie", pos);
                    s->session->set(en->key, en->value);
                } else {
                    need_args(e, a, 2, 2);
                    s->session->set(as_text(a[0], pos), as_text(a[1], pos));
                }
                return true;
            }
            if (k == "cookie" || k == "get") {
                need_args(e, a, 1, 1);
                auto v = s->session->get(as_text(a[0], pos));
                return v ? Value(*v) : Value{};
            }
            no_member(e, target);
        }

        if (auto* en = std::get_if<EntryV>(&target.v)) {
            if (k == "key" || k == "name") return en->key;
            if (k == "value") return en->value;
            no_member(e, target);
        }

        if (auto* l = std::get_if<ListV>(&target.v)) {
            const auto& items = *l->items;
            if (k == "size" || k == "length") return static_cast<std::int64_t>(items.size());
            if (k == "isempty") return items.empty();
            if (k == "entryset" || k == "values" || k == "tolist") return target;
            if (k == "get") {
                need_args(e, a, 1, 1);
                std::size_t i = as_index(a[0], pos);
                if (i >= items.size()) throw PositionError("get", i, items.size());
                return items[i];
            }
            if (k == "contains") {
                need_args(e, a, 1, 1);
                for (const auto& item : items)
                    if (values_equal(item, a[0])) return true;
                return false;
            }
            no_member(e, target);
        }

        if (auto* t = std::get_if<TypeNameV>(&target.v)) {
            std::string type = canonical_type(t->name);
            if (k == "valueof" || k == "parseboolean" || k == "parseint" || k == "tostring") {
                need_args(e, a, 1, 1);
                if (type == "String" || k == "tostring") return as_text(a[0], pos);
                if (type == "Boolean") {
                    if (auto* b = std::get_if<bool>(&a[0].v)) return *b;
                    return lower(as_text(a[0], pos)) == "true";
                }
                if (type == "Int") {
                    if (auto* i = std::get_if<std::int64_t>(&a[0].v)) return *i;
                    std::string s = as_text(a[0], pos);
                    if (type_of(s) != "Int") throw EvalError("'" + s + "' is not an integer", pos);
                    return static_cast<std::int64_t>(std::stoll(s));
                }
            }
            no_member(e, target);
        }

        if (auto* s = std::get_if<std::string>(&target.v)) {
            if (k == "length" || k == "size") return static_cast<std::int64_t>(s->size());
            if (k == "isempty") return s->empty();
            if (k == "tostring") return *s;
            if (k == "equals") return need_args(e, a, 1, 1), values_equal(target, a[0]);
            if (k == "contains") return need_args(e, a, 1, 1), s->find(as_text(a[0], pos)) != std::string::npos;
            no_member(e, target);
        }

        if (std::holds_alternative<bool>(target.v) || std::holds_alternative<std::int64_t>(target.v)) {
            if (k == "tostring") return as_text(target, pos);
            if (k == "equals") return need_args(e, a, 1, 1), values_equal(target, a[0]);
        }
        no_member(e, target);
    }
};

}  // namespace

Verdict evaluate_relation(const RelationAst& ast, EvalEnv& env) { return Interp(ast, env).run(); }

}  // namespace mst::smrl
