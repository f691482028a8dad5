#include "mst/script.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "mst/url.h"

namespace mst {

ScriptError::ScriptError(const std::string& source, int line, const std::string& message)
    : std::runtime_error(source + ":" + std::to_string(line) + ": " + message), line_(line) {}

Action make_login_action(const User& u, const CampaignConfig& cfg) {
    Action a = Action::web("POST", resolve_url(cfg.sut.secure_base + "/", cfg.login.path));
    a.form_inputs = {{cfg.login.user_field, u.username}, {cfg.login.password_field, u.password}};
    a.element = ElementKind::Button;
    a.element_url = resolve_url(cfg.sut.secure_base + "/", cfg.login.path);
    a.user = u;
    a.channel = cfg.sut.default_channel;
    return a;
}

namespace {

Params parse_pairs(const std::vector<std::string>& words, std::size_t from, const std::string& source, int line) {
    Params out;
    for (std::size_t i = from; i < words.size(); ++i) {
        auto eq = words[i].find('=');
        if (eq == std::string::npos || eq == 0)
            throw ScriptError(source, line, "expected name=value, got '" + words[i] + "'");
        out.emplace_back(decode_url(words[i].substr(0, eq)), decode_url(words[i].substr(eq + 1)));
    }
    return out;
}

}  // namespace

InputSequence parse_script(const std::string& text, const CampaignConfig& cfg, const std::string& source) {
    std::vector<Action> actions;
    User current = User::anonymous();
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    std::string base = cfg.sut.secure_base + "/";
    while (std::getline(in, raw)) {
        ++line;
        std::istringstream ls(raw);
        std::vector<std::string> words;
        for (std::string w; ls >> w;) words.push_back(w);
        if (words.empty() || words[0][0] == '#') continue;
        const std::string& verb = words[0];
        if (verb == "login") {
            if (words.size() != 2) throw ScriptError(source, line, "usage: login <user>");
            const User* u = find_credential(cfg, words[1]);
            if (!u) throw ScriptError(source, line, "unknown user '" + words[1] + "'");
            current = *u;
            actions.push_back(make_login_action(current, cfg));
        } else if (verb == "get" || verb == "post") {
            if (words.size() < 2) throw ScriptError(source, line, "usage: " + verb + " <url> [name=value ...]");
            std::string url = resolve_url(base, words[1]);
            if (url.empty()) throw ScriptError(source, line, "bad url '" + words[1] + "'");
            ParsedUrl parsed = parse_url(url);
            Action a = Action::web(verb == "get" ? "GET" : "POST", url.substr(0, url.find('?')));
            a.parameters = parse_query(parsed.query);
            Params pairs = parse_pairs(words, 2, source, line);
            if (verb == "get")
                a.parameters.insert(a.parameters.end(), pairs.begin(), pairs.end());
            else
                a.form_inputs = pairs;
            a.element = verb == "post" ? ElementKind::Button : ElementKind::Anchor;
            a.user = current;
            a.channel = cfg.sut.default_channel;
            actions.push_back(std::move(a));
        } else if (verb == "wait") {
            if (words.size() != 2) throw ScriptError(source, line, "usage: wait <ms>");
            try {
                std::size_t used = 0;
                long long ms = std::stoll(words[1], &used);
                if (used != words[1].size() || ms < 0) throw std::invalid_argument(words[1]);
                actions.push_back(Action::wait(ms));
            } catch (const std::exception&) {
                throw ScriptError(source, line, "bad duration '" + words[1] + "'");
            }
        } else if (verb == "reset") {
            if (words.size() != 1) throw ScriptError(source, line, "usage: reset");
            actions.push_back(Action::reset_sut());
        } else {
            throw ScriptError(source, line, "unknown verb '" + verb + "'");
        }
    }
    std::string id = "script:" + std::filesystem::path(source).stem().string();
    return make_sequence(std::move(actions), Origin::Script, id);
}

InputSequence load_script(const std::string& path, const CampaignConfig& cfg) {
    std::ifstream in(path);
    if (!in) throw ScriptError(path, 0, "cannot open file");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_script(ss.str(), cfg, path);
}

}  // namespace mst
