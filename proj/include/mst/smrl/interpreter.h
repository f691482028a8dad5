#pragma once

// Direct evaluation of parsed relations.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "mst/executor.h"
#include "mst/model.h"
#include "mst/provider.h"
#include "mst/smrl/ast.h"
#include "mst/web_utils.h"

namespace mst::smrl {

/// Runtime failure inside a relation (type mismatch, bad index, ...).
/// Never counted as a violation.
class EvalError : public std::runtime_error {
public:
    EvalError(const std::string& message, SourcePos pos);
    SourcePos pos() const { return pos_; }

private:
    SourcePos pos_;
};

struct Value;
using ValueList = std::vector<Value>;

struct TypeNameV {
    std::string name;
};
struct SeqRefV {
    std::shared_ptr<InputSequence> seq;
};
struct ActionRefV {
    std::shared_ptr<InputSequence> seq;
    std::size_t index = 0;
};
struct ActionListV {
    std::shared_ptr<InputSequence> seq;
    std::size_t from = 0;
    std::size_t to = 0;
};
struct UserV {
    User user;
};
struct OutputV {
    std::shared_ptr<const WebOutput> out;
};
struct SessionV {
    std::shared_ptr<Session> session;
};
struct EntryV {
    std::string key;
    std::string value;
};
struct ListV {
    std::shared_ptr<ValueList> items;
};

struct Value {
    std::variant<std::monostate, bool, std::int64_t, std::string, TypeNameV, SeqRefV, ActionRefV, ActionListV,
                 UserV, OutputV, SessionV, EntryV, ListV>
        v;

    Value() = default;
    template <class T>
        requires(!std::is_same_v<std::decay_t<T>, Value>)
    Value(T x) : v(std::move(x)) {}
};

/// Printable type name used in error messages.
std::string value_type_name(const Value& v);

struct LoggedOutput {
    std::shared_ptr<const InputSequence> seq;  // snapshot at access time
    std::size_t position = 0;
    std::shared_ptr<const WebOutput> output;
    bool follow_up = false;
};

struct Violation {
    int expression_index = -1;
    SourcePos pos;
    std::vector<LoggedOutput> context;
    std::vector<std::shared_ptr<const InputSequence>> sources;
    std::vector<std::shared_ptr<const InputSequence>> follow_ups;
};

struct Verdict {
    bool holds = true;
    std::optional<Violation> violation;
};

struct EvalEnv {
    const DataProvider& provider;
    Executor& executor;
    const WebConfig& web;
    NotTriedStore& tried;
    std::int64_t max_iterations = 1000000;
    /// Called after every outermost-loop iteration with the registry size.
    std::function<void(std::size_t)> on_outer_iteration_end;
    /// Polled once per loop iteration; returning true aborts with EvalError.
    std::function<bool()> should_stop;
};

Verdict evaluate_relation(const RelationAst& ast, EvalEnv& env);

}  // namespace mst::smrl
