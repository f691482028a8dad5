#pragma once

// Interaction and output data model shared by every stage of a campaign:
// users, cookie sessions, actions, input sequences and web outputs.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mst {

/// Raised when an index or range passed to a sequence operation is invalid.
class PositionError : public std::out_of_range {
public:
    PositionError(const std::string& what, std::size_t index, std::size_t size);
    std::size_t index() const { return index_; }
    std::size_t size() const { return size_; }

private:
    std::size_t index_;
    std::size_t size_;
};

struct User {
    std::string username;
    std::string password;
    std::string role;
    std::string id;

    /// The anonymous visitor: empty credentials, fixed id.
    static User anonymous();
    bool is_anonymous() const { return id == "anonymous"; }

    bool operator==(const User&) const = default;
};

/// Ordered cookie jar (name -> value); names are unique.
class Session {
public:
    using Cookie = std::pair<std::string, std::string>;

    Session() = default;
    explicit Session(std::vector<Cookie> cookies);

    const std::vector<Cookie>& cookies() const { return cookies_; }
    bool empty() const { return cookies_.empty(); }
    std::optional<std::string> get(const std::string& name) const;
    /// Replaces the value of an existing cookie or appends a new one.
    void set(const std::string& name, const std::string& value);
    bool erase(const std::string& name);
    void merge(const Session& other);

    /// "a=1; b=2" form used in the Cookie request header.
    std::string to_cookie_header() const;
    static Session parse_cookie_header(const std::string& header);

    bool operator==(const Session&) const = default;

private:
    std::vector<Cookie> cookies_;
};

enum class Channel { Http, Https };
enum class ActionKind { Web, Wait, ResetSut };
enum class Origin { Crawler, Script, Derived };

/// How the crawler triggered a web action.
enum class ElementKind { None, Entry, Anchor, Button, Script };

std::string to_string(Channel c);
std::string to_string(ActionKind k);
std::string to_string(Origin o);
std::string to_string(ElementKind e);
Channel channel_from_string(const std::string& s);
ActionKind action_kind_from_string(const std::string& s);
Origin origin_from_string(const std::string& s);
ElementKind element_kind_from_string(const std::string& s);

using Params = std::vector<std::pair<std::string, std::string>>;

struct FileUpload {
    std::string field;
    std::string path;
    bool operator==(const FileUpload&) const = default;
};

struct Action {
    ActionKind kind = ActionKind::Web;

    // WebAction
    std::string method = "GET";
    std::string url;
    Params parameters;
    Params form_inputs;
    std::string element_url;
    std::string element_path;
    ElementKind element = ElementKind::None;
    User user = User::anonymous();
    std::optional<Session> session_override;
    Channel channel = Channel::Https;
    std::optional<FileUpload> upload;

    // WaitAction
    std::int64_t duration_ms = 0;

    std::size_t position = 0;

    static Action web(std::string method, std::string url);
    static Action wait(std::int64_t duration_ms);
    static Action reset_sut();

    bool is_web() const { return kind == ActionKind::Web; }

    // Indexed mutators return false (leaving the action untouched) when the
    // index is out of range.
    bool set_parameter_value(std::size_t i, std::string value);
    bool set_form_input(std::size_t i, std::string value);
    bool set_channel(Channel c);
    bool set_session(Session s);

    bool operator==(const Action&) const = default;
};

struct InputSequence {
    std::string id;
    Origin origin = Origin::Crawler;
    std::string source_id;
    std::vector<Action> actions;
    /// Bumped by every in-place mutation; output caches key on it.
    std::uint64_t revision = 0;

    std::size_t size() const { return actions.size(); }
    void renumber();
    /// Structural equality: same actions, ignoring identity and origin.
    bool same_actions(const InputSequence& other) const { return actions == other.actions; }
};

/// Process-unique identifier with the given prefix.
std::string next_sequence_id(const std::string& prefix = "d");

InputSequence make_sequence(std::vector<Action> actions, Origin origin, std::string id = {});

InputSequence clone_input(const InputSequence& src);
InputSequence add_action(const InputSequence& seq, std::size_t index, Action a);
/// In-place variant used by the interpreter's method form.
void insert_action(InputSequence& seq, std::size_t index, Action a);
InputSequence sublist(const InputSequence& seq, std::size_t from, std::size_t to);

struct RequestRecord {
    std::string method;
    std::string url;
    bool operator==(const RequestRecord&) const = default;
    auto operator<=>(const RequestRecord&) const = default;
};

struct WebOutput {
    int status = 0;
    std::string body;
    Session session;
    bool has_alert = false;
    std::vector<RequestRecord> request_log;

    bool is_empty_file() const { return body.empty(); }
    bool operator==(const WebOutput&) const = default;
};

}  // namespace mst
