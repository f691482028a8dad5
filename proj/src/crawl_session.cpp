#include "mst/crawl_session.h"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "mst/graph.h"
#include "mst/url.h"

namespace mst {

using nlohmann::json;

namespace {

json params_json(const Params& p) {
    json a = json::array();
    for (const auto& [k, v] : p) a.push_back(json::array({k, v}));
    return a;
}

json session_json(const Session& s) { return params_json(s.cookies()); }

json user_json(const User& u) {
    return {{"username", u.username}, {"password", u.password}, {"role", u.role}, {"id", u.id}};
}

json action_json(const Action& a) {
    json j = {{"kind", to_string(a.kind)}, {"position", a.position}};
    switch (a.kind) {
        case ActionKind::Wait: j["duration_ms"] = a.duration_ms; break;
        case ActionKind::ResetSut: break;
        case ActionKind::Web:
            j["method"] = a.method;
            j["url"] = a.url;
            j["parameters"] = params_json(a.parameters);
            j["form_inputs"] = params_json(a.form_inputs);
            j["element_url"] = a.element_url;
            j["element_path"] = a.element_path;
            j["element"] = to_string(a.element);
            j["user"] = user_json(a.user);
            j["session_override"] = a.session_override ? session_json(*a.session_override) : json(nullptr);
            j["channel"] = to_string(a.channel);
            j["upload"] = a.upload ? json{{"field", a.upload->field}, {"path", a.upload->path}} : json(nullptr);
            break;
    }
    return j;
}

json output_json(const WebOutput& o) {
    json log = json::array();
    for (const auto& r : o.request_log) log.push_back({{"method", r.method}, {"url", r.url}});
    return {{"status", o.status},
            {"body", o.body},
            {"session", session_json(o.session)},
            {"has_alert", o.has_alert},
            {"request_log", log}};
}

// Field access that reports the full path of a missing or mistyped field.
class Reader {
public:
    Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {}

    const json& raw() const { return j_; }
    const std::string& path() const { return path_; }

    bool has(const char* key) const { return j_.is_object() && j_.contains(key) && !j_.at(key).is_null(); }

    Reader at(const char* key) const {
        if (!j_.is_object() || !j_.contains(key)) throw LoadError("missing field '" + sub(key) + "'");
        return Reader(j_.at(key), sub(key));
    }

    Reader at(std::size_t i) const { return Reader(j_.at(i), path_ + "[" + std::to_string(i) + "]"); }

    std::size_t size() const {
        if (!j_.is_array()) throw LoadError("field '" + path_ + "' must be an array");
        return j_.size();
    }

    template <class T>
    T get() const {
        try {
            return j_.get<T>();
        } catch (const json::exception&) {
            throw LoadError("field '" + path_ + "' has the wrong type");
        }
    }

    template <class T>
    T get(const char* key) const {
        return at(key).get<T>();
    }

    template <class T>
    T get_or(const char* key, T fallback) const {
        return has(key) ? at(key).get<T>() : fallback;
    }

private:
    std::string sub(const char* key) const { return path_.empty() ? key : path_ + "." + key; }
    const json& j_;
    std::string path_;
};

Params read_params(const Reader& r) {
    Params p;
    for (std::size_t i = 0; i < r.size(); ++i) {
        Reader e = r.at(i);
        if (e.size() != 2) throw LoadError("field '" + e.path() + "' must be a [name, value] pair");
        p.emplace_back(e.at(std::size_t{0}).get<std::string>(), e.at(std::size_t{1}).get<std::string>());
    }
    return p;
}

Session read_session(const Reader& r) { return Session(read_params(r)); }

User read_user(const Reader& r) {
    User u;
    u.username = r.get<std::string>("username");
    u.password = r.get_or<std::string>("password", "");
    u.role = r.get_or<std::string>("role", "");
    u.id = r.get_or<std::string>("id", u.username);
    return u;
}

template <class F>
auto enum_field(const Reader& r, const char* key, F parse) {
    auto text = r.get<std::string>(key);
    try {
        return parse(text);
    } catch (const std::invalid_argument& e) {
        throw LoadError("field '" + r.at(key).path() + "': " + e.what());
    }
}

Action read_action(const Reader& r) {
    Action a;
    a.kind = enum_field(r, "kind", action_kind_from_string);
    a.position = r.get_or<std::size_t>("position", 0);
    switch (a.kind) {
        case ActionKind::Wait:
            a.method.clear();
            a.duration_ms = r.get<std::int64_t>("duration_ms");
            break;
        case ActionKind::ResetSut: a.method.clear(); break;
        case ActionKind::Web:
            a.method = r.get<std::string>("method");
            a.url = r.get<std::string>("url");
            if (r.has("parameters")) a.parameters = read_params(r.at("parameters"));
            if (r.has("form_inputs")) a.form_inputs = read_params(r.at("form_inputs"));
            a.element_url = r.get_or<std::string>("element_url", "");
            a.element_path = r.get_or<std::string>("element_path", "");
            if (r.has("element")) a.element = enum_field(r, "element", element_kind_from_string);
            a.user = r.has("user") ? read_user(r.at("user")) : User::anonymous();
            if (r.has("session_override")) a.session_override = read_session(r.at("session_override"));
            if (r.has("channel")) a.channel = enum_field(r, "channel", channel_from_string);
            if (r.has("upload")) {
                Reader u = r.at("upload");
                a.upload = FileUpload{u.get<std::string>("field"), u.get<std::string>("path")};
            }
            break;
    }
    return a;
}

WebOutput read_output(const Reader& r) {
    WebOutput o;
    o.status = r.get<int>("status");
    o.body = r.get<std::string>("body");
    if (r.has("session")) o.session = read_session(r.at("session"));
    o.has_alert = r.get_or<bool>("has_alert", false);
    if (r.has("request_log")) {
        Reader log = r.at("request_log");
        for (std::size_t i = 0; i < log.size(); ++i)
            o.request_log.push_back({log.at(i).get<std::string>("method"), log.at(i).get<std::string>("url")});
    }
    return o;
}

json sequence_json(const InputSequence& s) {
    json actions = json::array();
    for (const auto& a : s.actions) actions.push_back(action_json(a));
    return {{"id", s.id}, {"origin", to_string(s.origin)}, {"source_id", s.source_id}, {"actions", actions}};
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw LoadError(path + ": cannot open file");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

std::vector<std::vector<int>> derive_paths(const CrawlSession& s) {
    std::vector<GraphEdge> edges;
    int entry = -1;
    for (const auto& e : s.edges) {
        if (e.from < 0) {
            if (entry < 0) entry = e.id;
            continue;
        }
        edges.push_back({e.id, e.from, e.to});
    }
    auto paths = dfs_paths(s.states.size(), edges, s.root_state);
    if (entry >= 0)
        for (auto& p : paths) p.insert(p.begin(), entry);
    return paths;
}

std::vector<InputSequence> derive_source_inputs(const CrawlSession& s) {
    std::vector<InputSequence> out;
    std::map<int, const CrawlEdge*> by_id;
    for (const auto& e : s.edges) by_id[e.id] = &e;
    const auto& lists = s.derived_inputs.empty() ? derive_paths(s) : s.derived_inputs;
    for (std::size_t k = 0; k < lists.size(); ++k) {
        std::vector<Action> actions;
        for (int id : lists[k]) {
            auto it = by_id.find(id);
            if (it == by_id.end()) throw LoadError("derived input refers to unknown edge " + std::to_string(id));
            actions.push_back(it->second->action);
        }
        out.push_back(make_sequence(std::move(actions), Origin::Crawler,
                                    s.user.username + "#" + std::to_string(k + 1)));
    }
    return out;
}

std::string session_to_json(const CrawlSession& s) {
    json states = json::array();
    for (const auto& st : s.states) states.push_back({{"id", st.id}, {"url", st.url}, {"body", st.body}});
    json edges = json::array();
    for (const auto& e : s.edges)
        edges.push_back(
            {{"id", e.id}, {"from", e.from}, {"to", e.to}, {"action", action_json(e.action)}, {"output", output_json(e.output)}});
    json j = {{"header", {{"user", user_json(s.user)}, {"timestamp", s.timestamp}, {"sut", s.sut}}},
              {"states", states},
              {"edges", edges},
              {"root_state", s.root_state},
              {"gui_urls", s.gui_urls},
              {"derived_inputs", s.derived_inputs},
              {"budget_spent_ms", s.budget_spent_ms},
              {"login_failed", s.login_failed}};
    return j.dump(1) + "\n";
}

CrawlSession session_from_json(const std::string& text, const std::string& origin_name) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw LoadError(origin_name + ": not valid JSON (" + e.what() + ")");
    }
    try {
        Reader r(j, "");
        CrawlSession s;
        Reader h = r.at("header");
        s.user = read_user(h.at("user"));
        s.timestamp = h.get_or<std::string>("timestamp", "");
        s.sut = h.get_or<std::string>("sut", "");
        Reader states = r.at("states");
        for (std::size_t i = 0; i < states.size(); ++i) {
            Reader st = states.at(i);
            s.states.push_back({st.get<int>("id"), st.get_or<std::string>("url", ""), st.get<std::string>("body")});
        }
        Reader edges = r.at("edges");
        for (std::size_t i = 0; i < edges.size(); ++i) {
            Reader e = edges.at(i);
            CrawlEdge ce;
            ce.id = e.get<int>("id");
            ce.from = e.get<int>("from");
            ce.to = e.get<int>("to");
            ce.action = read_action(e.at("action"));
            ce.output = read_output(e.at("output"));
            s.edges.push_back(std::move(ce));
        }
        s.root_state = r.get<int>("root_state");
        s.gui_urls = r.get_or<std::vector<std::string>>("gui_urls", {});
        s.derived_inputs = r.get_or<std::vector<std::vector<int>>>("derived_inputs", {});
        s.budget_spent_ms = r.get_or<std::int64_t>("budget_spent_ms", 0);
        s.login_failed = r.get_or<bool>("login_failed", false);
        return s;
    } catch (const LoadError& e) {
        throw LoadError(origin_name + ": " + e.what());
    } catch (const json::exception& e) {
        throw LoadError(origin_name + ": " + e.what());
    }
}

void save_session(const CrawlSession& s, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw LoadError(path + ": cannot write file");
    out << session_to_json(s);
}

CrawlSession load_session(const std::string& path) { return session_from_json(read_file(path), path); }

std::string sequence_to_json(const InputSequence& s) { return sequence_json(s).dump(1); }

InputSequence sequence_from_json(const std::string& text) {
    json j = json::parse(text);
    Reader r(j, "");
    InputSequence s;
    s.id = r.get<std::string>("id");
    s.origin = enum_field(r, "origin", origin_from_string);
    s.source_id = r.get_or<std::string>("source_id", "");
    Reader actions = r.at("actions");
    for (std::size_t i = 0; i < actions.size(); ++i) s.actions.push_back(read_action(actions.at(i)));
    s.renumber();
    return s;
}

void CrawlIndex::add_session(const CrawlSession& s) {
    const std::string& user = s.user.username;
    auto& urls = gui_urls[user];
    for (const auto& u : s.gui_urls) urls.insert(u);
    auto& bodies = contents[user];
    for (const auto& e : s.edges) {
        if (e.action.is_web()) urls.insert(normalize_url(e.action.url, e.action.parameters));
        bodies.push_back(e.output.body);
    }
    for (const auto& e : s.edges) {
        const Action& a = e.action;
        if (!a.is_web()) continue;
        auto& uses = param_uses[normalize_base(a.url)];
        for (std::size_t i = 0; i < a.parameters.size(); ++i)
            uses.push_back({a.user.username, i, a.parameters[i].second});
    }
}

void CrawlIndex::add_sequence(const InputSequence& seq) {
    for (const auto& a : seq.actions) {
        if (!a.is_web()) continue;
        auto& uses = param_uses[normalize_base(a.url)];
        for (std::size_t i = 0; i < a.parameters.size(); ++i)
            uses.push_back({a.user.username, i, a.parameters[i].second});
    }
}

}  // namespace mst
