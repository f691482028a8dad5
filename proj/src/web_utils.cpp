#include "mst/web_utils.h"

#include <algorithm>
#include <cctype>
#include <map>
#include <stdexcept>

#include "mst/text_distance.h"
#include "mst/url.h"

namespace mst {

const std::regex& cached_regex(const std::string& pattern) {
    thread_local std::map<std::string, std::regex> cache;
    auto it = cache.find(pattern);
    if (it != cache.end()) return it->second;
    auto flags = std::regex::ECMAScript;
    std::string body = pattern;
    if (body.rfind("(?i)", 0) == 0) {
        body = body.substr(4);
        flags |= std::regex::icase;
    }
    try {
        return cache.emplace(pattern, std::regex(body, flags)).first->second;
    } catch (const std::regex_error& e) {
        throw std::invalid_argument("invalid regular expression '" + pattern + "': " + e.what());
    }
}

bool regex_search(const std::string& text, const std::string& pattern) {
    if (pattern.empty()) return false;
    return std::regex_search(text, cached_regex(pattern));
}

std::string scrub_body(const std::string& body, const WebConfig& cfg) {
    std::string out = body;
    for (const auto& p : cfg.scrub_patterns) out = std::regex_replace(out, cached_regex(p), "");
    return out;
}

bool outputs_equal(const WebOutput& a, const WebOutput& b, const WebConfig& cfg) {
    if (cfg.scrub_patterns.empty()) return within_relative_distance(a.body, b.body, cfg.similarity_threshold);
    return within_relative_distance(scrub_body(a.body, cfg), scrub_body(b.body, cfg), cfg.similarity_threshold);
}

bool is_error(const WebOutput& o, const WebConfig& cfg) {
    return o.status >= 400 || o.status == 0 || regex_search(o.body, cfg.error_pattern);
}

namespace {

bool has_credential_fields(const Action& a, const WebConfig& cfg) {
    bool user = false;
    bool pass = false;
    for (const auto& [name, value] : a.form_inputs) {
        if (regex_search(name, cfg.password_field_pattern))
            pass = true;
        else if (regex_search(name, cfg.user_field_pattern))
            user = true;
    }
    return user && pass;
}

bool path_matches(const Action& a, const std::string& pattern) {
    return a.is_web() && regex_search(parse_url(a.url).path, pattern);
}

}  // namespace

InputSequence change_credentials(const InputSequence& seq, const User& u, const WebConfig& cfg) {
    InputSequence out = clone_input(seq);
    for (auto& a : out.actions) {
        if (!a.is_web()) continue;
        bool login = is_login(a, cfg);
        a.user = u;
        if (!login) continue;
        for (auto& [name, value] : a.form_inputs) {
            if (regex_search(name, cfg.password_field_pattern))
                value = u.password;
            else if (regex_search(name, cfg.user_field_pattern))
                value = u.username;
        }
    }
    return out;
}

InputSequence copy_action_to(const InputSequence& seq, std::size_t from, std::size_t to) {
    if (from >= seq.actions.size()) throw PositionError("copy_action_to", from, seq.actions.size());
    return add_action(seq, to, seq.actions[from]);
}

std::string full_url(const Action& a) {
    if (a.parameters.empty()) return a.url;
    return a.url + (a.url.find('?') == std::string::npos ? "?" : "&") + build_query(a.parameters);
}

bool cannot_reach_through_gui(const CrawlIndex& crawl, const User& u, const std::string& url) {
    auto it = crawl.gui_urls.find(u.username);
    if (it == crawl.gui_urls.end()) throw std::invalid_argument("no crawl data for user '" + u.username + "'");
    return it->second.count(normalize_url(url)) == 0;
}

bool user_can_retrieve_content(const CrawlIndex& crawl, const User& u, const WebOutput& o, const WebConfig& cfg) {
    auto it = crawl.contents.find(u.username);
    if (it == crawl.contents.end()) return false;
    WebOutput probe;
    for (const auto& body : it->second) {
        probe.body = body;
        if (outputs_equal(probe, o, cfg)) return true;
    }
    return false;
}

bool is_login(const Action& a, const WebConfig& cfg) {
    return path_matches(a, cfg.login_pattern) && has_credential_fields(a, cfg);
}

bool is_signup(const Action& a, const WebConfig& cfg) {
    return path_matches(a, cfg.signup_pattern) && has_credential_fields(a, cfg);
}

bool is_reset_password(const Action& a, const WebConfig& cfg) {
    return path_matches(a, cfg.reset_password_pattern) && !a.form_inputs.empty();
}

bool is_click_on_button(const Action& a) { return a.is_web() && a.element == ElementKind::Button; }

bool contain_form_input(const Action& a) { return !a.form_inputs.empty(); }

bool after_login(const InputSequence& seq, std::size_t index, const WebConfig& cfg) {
    for (std::size_t i = 0; i < index && i < seq.actions.size(); ++i)
        if (is_login(seq.actions[i], cfg)) return true;
    return false;
}

bool is_supervisor_of(const User& a, const User& b, const WebConfig& cfg) {
    if (a.username == b.username) return true;
    for (const auto& [sup, sub] : cfg.supervisors)
        if (sup == a.username && sub == b.username) return true;
    return false;
}

std::vector<std::string> parameter_values_used_by_other_users(const CrawlIndex& crawl, const Action& a,
                                                              std::size_t par) {
    std::vector<std::string> out;
    auto it = crawl.param_uses.find(normalize_base(a.url));
    if (it == crawl.param_uses.end()) return out;
    for (const auto& use : it->second) {
        if (use.index != par || use.username == a.user.username) continue;
        if (std::find(out.begin(), out.end(), use.value) == out.end()) out.push_back(use.value);
    }
    return out;
}

bool NotTriedStore::check(const std::vector<std::string>& keys) { return seen_.insert(keys).second; }

std::string special_char_injection_beginning(const std::string& value, const std::string& ch) { return ch + value; }

std::string type_of(const std::string& value) {
    std::string lower;
    for (char c : value) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (lower == "true" || lower == "false") return "Boolean";
    std::size_t i = (!value.empty() && (value[0] == '-' || value[0] == '+')) ? 1 : 0;
    if (i < value.size() &&
        std::all_of(value.begin() + static_cast<std::ptrdiff_t>(i), value.end(),
                    [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
        return "Int";
    return "String";
}

}  // namespace mst
