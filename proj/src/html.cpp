#include "mst/html.h"

#include <algorithm>
#include <cctype>
#include <map>
#include <regex>

namespace mst {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

struct Tag {
    std::string name;  // lowercase, leading '/' for closing tags
    std::map<std::string, std::string> attrs;
};

// Parses the tag starting at body[pos] == '<'; advances pos past '>'.
bool read_tag(const std::string& body, std::size_t& pos, Tag& tag) {
    std::size_t i = pos + 1;
    const std::size_t n = body.size();
    if (i >= n) return false;
    if (body.compare(i, 3, "!--") == 0) {
        auto end = body.find("-->", i);
        pos = end == std::string::npos ? n : end + 3;
        tag.name = "!--";
        return true;
    }
    std::size_t name_start = i;
    if (body[i] == '/') ++i;
    while (i < n && (std::isalnum(static_cast<unsigned char>(body[i])) || body[i] == '!')) ++i;
    if (i == name_start || (i == name_start + 1 && body[name_start] == '/')) return false;
    tag.name = lower(body.substr(name_start, i - name_start));
    tag.attrs.clear();
    while (i < n && body[i] != '>') {
        while (i < n && (std::isspace(static_cast<unsigned char>(body[i])) || body[i] == '/')) ++i;
        if (i >= n || body[i] == '>') break;
        std::size_t an = i;
        while (i < n && !std::isspace(static_cast<unsigned char>(body[i])) && body[i] != '=' &&
               body[i] != '>')
            ++i;
        std::string attr = lower(body.substr(an, i - an));
        std::string value;
        while (i < n && std::isspace(static_cast<unsigned char>(body[i]))) ++i;
        if (i < n && body[i] == '=') {
            ++i;
            while (i < n && std::isspace(static_cast<unsigned char>(body[i]))) ++i;
            if (i < n && (body[i] == '"' || body[i] == '\'')) {
                char q = body[i++];
                std::size_t vs = i;
                while (i < n && body[i] != q) ++i;
                value = body.substr(vs, i - vs);
                if (i < n) ++i;
            } else {
                std::size_t vs = i;
                while (i < n && !std::isspace(static_cast<unsigned char>(body[i])) && body[i] != '>') ++i;
                value = body.substr(vs, i - vs);
            }
        }
        if (!attr.empty()) tag.attrs.emplace(attr, html_unescape(value));
    }
    pos = i < n ? i + 1 : n;
    return true;
}

std::string attr_or(const Tag& t, const std::string& key, const std::string& fallback = {}) {
    auto it = t.attrs.find(key);
    return it == t.attrs.end() ? fallback : it->second;
}

}  // namespace

PageElements scan_page(const std::string& body) {
    PageElements page;
    std::size_t pos = 0;
    std::size_t anchors = 0, forms = 0;
    bool in_form = false;
    HtmlForm current;
    while ((pos = body.find('<', pos)) != std::string::npos) {
        Tag tag;
        std::size_t at = pos;
        if (!read_tag(body, pos, tag)) {
            pos = at + 1;
            continue;
        }
        if (tag.name == "script" || tag.name == "style") {
            auto close = lower(body).find("</" + tag.name, pos);
            pos = close == std::string::npos ? body.size() : close;
            continue;
        }
        if (tag.name == "a") {
            auto href = attr_or(tag, "href");
            ++anchors;
            if (!href.empty()) page.links.push_back({href, "/html/a[" + std::to_string(anchors) + "]"});
        } else if (tag.name == "form") {
            if (in_form) page.forms.push_back(current);
            current = HtmlForm{};
            ++forms;
            current.action = attr_or(tag, "action");
            current.method = lower(attr_or(tag, "method", "get")) == "post" ? "POST" : "GET";
            current.path = "/html/form[" + std::to_string(forms) + "]";
            in_form = true;
        } else if (tag.name == "/form") {
            if (in_form) page.forms.push_back(current);
            in_form = false;
        } else if (in_form && (tag.name == "input" || tag.name == "textarea" || tag.name == "select")) {
            auto type = lower(attr_or(tag, "type", tag.name == "input" ? "text" : tag.name));
            if (type == "submit" || type == "button" || type == "image") {
                current.has_button = true;
                continue;
            }
            auto name = attr_or(tag, "name");
            if (!name.empty()) current.fields.push_back({name, attr_or(tag, "value"), type});
        } else if (in_form && tag.name == "button") {
            current.has_button = true;
        }
    }
    if (in_form) page.forms.push_back(current);
    return page;
}

std::string html_unescape(const std::string& s) {
    static const std::pair<const char*, char> entities[] = {
        {"&amp;", '&'}, {"&lt;", '<'}, {"&gt;", '>'}, {"&quot;", '"'}, {"&#39;", '\''}, {"&#x27;", '\''}};
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size();) {
        bool matched = false;
        if (s[i] == '&') {
            for (const auto& [ent, ch] : entities) {
                std::string e = ent;
                if (s.compare(i, e.size(), e) == 0) {
                    out += ch;
                    i += e.size();
                    matched = true;
                    break;
                }
            }
        }
        if (!matched) out += s[i++];
    }
    return out;
}

std::string html_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&#39;"; break;
            default: out += c;
        }
    }
    return out;
}

bool contains_executable_alert(const std::string& body, const std::string& marker_regex) {
    const std::string low = lower(body);
    const std::regex marker(marker_regex, std::regex::icase);
    std::size_t pos = 0;
    while ((pos = low.find("<script", pos)) != std::string::npos) {
        auto open_end = low.find('>', pos);
        if (open_end == std::string::npos) return false;
        auto close = low.find("</script", open_end);
        std::string region = body.substr(open_end + 1, close == std::string::npos ? std::string::npos
                                                                              : close - open_end - 1);
        if (std::regex_search(region, marker)) return true;
        pos = open_end + 1;
    }
    return false;
}

}  // namespace mst
