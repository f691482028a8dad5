#include "mst/model.h"

#include <atomic>
#include <sstream>

namespace mst {

PositionError::PositionError(const std::string& what, std::size_t index, std::size_t size)
    : std::out_of_range(what + ": index " + std::to_string(index) + " outside [0, " +
                        std::to_string(size) + "]"),
      index_(index),
      size_(size) {}

User User::anonymous() {
    return User{"anonymous", "", "anonymous", "anonymous"};
}

Session::Session(std::vector<Cookie> cookies) {
    for (auto& [name, value] : cookies) set(name, value);
}

std::optional<std::string> Session::get(const std::string& name) const {
    for (const auto& [n, v] : cookies_)
        if (n == name) return v;
    return std::nullopt;
}

void Session::set(const std::string& name, const std::string& value) {
    for (auto& [n, v] : cookies_) {
        if (n == name) {
            v = value;
            return;
        }
    }
    cookies_.emplace_back(name, value);
}

bool Session::erase(const std::string& name) {
    for (auto it = cookies_.begin(); it != cookies_.end(); ++it) {
        if (it->first == name) {
            cookies_.erase(it);
            return true;
        }
    }
    return false;
}

void Session::merge(const Session& other) {
    for (const auto& [n, v] : other.cookies_) set(n, v);
}

std::string Session::to_cookie_header() const {
    std::string out;
    for (const auto& [n, v] : cookies_) {
        if (!out.empty()) out += "; ";
        out += n;
        out += '=';
        out += v;
    }
    return out;
}

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return {};
    auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

}  // namespace

Session Session::parse_cookie_header(const std::string& header) {
    Session s;
    std::size_t start = 0;
    while (start <= header.size()) {
        auto end = header.find(';', start);
        if (end == std::string::npos) end = header.size();
        auto part = trim(header.substr(start, end - start));
        if (!part.empty()) {
            auto eq = part.find('=');
            if (eq == std::string::npos)
                s.set(part, "");
            else
                s.set(trim(part.substr(0, eq)), trim(part.substr(eq + 1)));
        }
        start = end + 1;
    }
    return s;
}

std::string to_string(Channel c) { return c == Channel::Http ? "http" : "https"; }

std::string to_string(ActionKind k) {
    switch (k) {
        case ActionKind::Web: return "web";
        case ActionKind::Wait: return "wait";
        case ActionKind::ResetSut: return "reset";
    }
    return "web";
}

std::string to_string(Origin o) {
    switch (o) {
        case Origin::Crawler: return "crawler";
        case Origin::Script: return "script";
        case Origin::Derived: return "derived";
    }
    return "crawler";
}

std::string to_string(ElementKind e) {
    switch (e) {
        case ElementKind::None: return "none";
        case ElementKind::Entry: return "entry";
        case ElementKind::Anchor: return "anchor";
        case ElementKind::Button: return "button";
        case ElementKind::Script: return "script";
    }
    return "none";
}

Channel channel_from_string(const std::string& s) {
    if (s == "http" || s == "HTTP" || s == "Http") return Channel::Http;
    if (s == "https" || s == "HTTPS" || s == "Https") return Channel::Https;
    throw std::invalid_argument("unknown channel '" + s + "'");
}

ActionKind action_kind_from_string(const std::string& s) {
    if (s == "web") return ActionKind::Web;
    if (s == "wait") return ActionKind::Wait;
    if (s == "reset") return ActionKind::ResetSut;
    throw std::invalid_argument("unknown action kind '" + s + "'");
}

Origin origin_from_string(const std::string& s) {
    if (s == "crawler") return Origin::Crawler;
    if (s == "script") return Origin::Script;
    if (s == "derived") return Origin::Derived;
    throw std::invalid_argument("unknown origin '" + s + "'");
}

ElementKind element_kind_from_string(const std::string& s) {
    if (s == "none") return ElementKind::None;
    if (s == "entry") return ElementKind::Entry;
    if (s == "anchor") return ElementKind::Anchor;
    if (s == "button") return ElementKind::Button;
    if (s == "script") return ElementKind::Script;
    throw std::invalid_argument("unknown element kind '" + s + "'");
}

Action Action::web(std::string method, std::string url) {
    Action a;
    a.method = std::move(method);
    a.url = std::move(url);
    return a;
}

Action Action::wait(std::int64_t duration_ms) {
    Action a;
    a.kind = ActionKind::Wait;
    a.method.clear();
    a.duration_ms = duration_ms;
    return a;
}

Action Action::reset_sut() {
    Action a;
    a.kind = ActionKind::ResetSut;
    a.method.clear();
    return a;
}

bool Action::set_parameter_value(std::size_t i, std::string value) {
    if (i >= parameters.size()) return false;
    parameters[i].second = std::move(value);
    return true;
}

bool Action::set_form_input(std::size_t i, std::string value) {
    if (i >= form_inputs.size()) return false;
    form_inputs[i].second = std::move(value);
    return true;
}

bool Action::set_channel(Channel c) {
    channel = c;
    return true;
}

bool Action::set_session(Session s) {
    session_override = std::move(s);
    return true;
}

void InputSequence::renumber() {
    for (std::size_t i = 0; i < actions.size(); ++i) actions[i].position = i;
}

std::string next_sequence_id(const std::string& prefix) {
    static std::atomic<std::uint64_t> counter{0};
    return prefix + std::to_string(++counter);
}

InputSequence make_sequence(std::vector<Action> actions, Origin origin, std::string id) {
    InputSequence s;
    s.id = id.empty() ? next_sequence_id(origin == Origin::Derived ? "d" : "s") : std::move(id);
    s.origin = origin;
    s.actions = std::move(actions);
    s.renumber();
    return s;
}

InputSequence clone_input(const InputSequence& src) {
    InputSequence copy = src;
    copy.id = next_sequence_id("d");
    copy.origin = Origin::Derived;
    copy.source_id = src.origin == Origin::Derived && !src.source_id.empty() ? src.source_id : src.id;
    copy.revision = 0;
    return copy;
}

void insert_action(InputSequence& seq, std::size_t index, Action a) {
    if (index > seq.actions.size()) throw PositionError("add_action", index, seq.actions.size());
    seq.actions.insert(seq.actions.begin() + static_cast<std::ptrdiff_t>(index), std::move(a));
    seq.renumber();
    ++seq.revision;
}

InputSequence add_action(const InputSequence& seq, std::size_t index, Action a) {
    if (index > seq.actions.size()) throw PositionError("add_action", index, seq.actions.size());
    InputSequence out = clone_input(seq);
    insert_action(out, index, std::move(a));
    return out;
}

InputSequence sublist(const InputSequence& seq, std::size_t from, std::size_t to) {
    if (to > seq.actions.size()) throw PositionError("sublist", to, seq.actions.size());
    if (from > to) throw PositionError("sublist", from, to);
    InputSequence out = clone_input(seq);
    out.actions.assign(seq.actions.begin() + static_cast<std::ptrdiff_t>(from),
                       seq.actions.begin() + static_cast<std::ptrdiff_t>(to));
    out.renumber();
    return out;
}

}  // namespace mst
