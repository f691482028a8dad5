#include "mst/url.h"

#include <algorithm>
#include <cctype>

namespace mst {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

int default_port(const std::string& scheme) {
    if (scheme == "http") return 80;
    if (scheme == "https") return 443;
    return 0;
}

}  // namespace

ParsedUrl parse_url(const std::string& url) {
    ParsedUrl p;
    std::string rest = url;
    auto frag = rest.find('#');
    if (frag != std::string::npos) rest.erase(frag);
    auto scheme_end = rest.find("://");
    if (scheme_end != std::string::npos) {
        p.scheme = lower(rest.substr(0, scheme_end));
        rest = rest.substr(scheme_end + 3);
        auto slash = rest.find_first_of("/?");
        std::string authority = rest.substr(0, slash);
        rest = slash == std::string::npos ? "" : rest.substr(slash);
        auto at = authority.rfind('@');
        if (at != std::string::npos) authority = authority.substr(at + 1);
        auto colon = authority.rfind(':');
        if (colon != std::string::npos && authority.find(']') == std::string::npos) {
            p.host = lower(authority.substr(0, colon));
            try {
                p.port = std::stoi(authority.substr(colon + 1));
            } catch (...) {
                p.port = 0;
            }
        } else {
            p.host = lower(authority);
        }
    }
    auto q = rest.find('?');
    if (q != std::string::npos) {
        p.query = rest.substr(q + 1);
        rest.erase(q);
    }
    p.path = rest.empty() ? "/" : rest;
    return p;
}

std::string url_origin(const std::string& url) {
    auto p = parse_url(url);
    std::string o = p.scheme + "://" + p.host;
    if (p.port != 0) o += ":" + std::to_string(p.port);
    return o;
}

std::string url_target(const std::string& url) {
    auto p = parse_url(url);
    return p.query.empty() ? p.path : p.path + "?" + p.query;
}

std::string with_origin(const std::string& url, const std::string& origin) {
    std::string o = origin;
    while (!o.empty() && o.back() == '/') o.pop_back();
    return o + url_target(url);
}

std::string resolve_url(const std::string& page_url, const std::string& href) {
    if (href.empty()) return page_url;
    if (href.rfind("http://", 0) == 0 || href.rfind("https://", 0) == 0) return href;
    if (href.find(':') != std::string::npos && href.find(':') < href.find_first_of("/?#") )
        return {};  // javascript:, mailto:, ...
    if (href[0] == '#') return page_url;
    if (href[0] == '/') return url_origin(page_url) + href;
    auto p = parse_url(page_url);
    auto dir = p.path.substr(0, p.path.rfind('/') + 1);
    return url_origin(page_url) + dir + href;
}

Params parse_query(const std::string& query) {
    Params out;
    std::size_t start = 0;
    while (start < query.size()) {
        auto end = query.find('&', start);
        if (end == std::string::npos) end = query.size();
        auto part = query.substr(start, end - start);
        if (!part.empty()) {
            auto eq = part.find('=');
            if (eq == std::string::npos)
                out.emplace_back(decode_url(part), "");
            else
                out.emplace_back(decode_url(part.substr(0, eq)), decode_url(part.substr(eq + 1)));
        }
        start = end + 1;
    }
    return out;
}

std::string build_query(const Params& params) {
    std::string out;
    for (const auto& [k, v] : params) {
        if (!out.empty()) out += '&';
        out += encode_url(k);
        out += '=';
        out += encode_url(v);
    }
    return out;
}

std::string encode_url(const std::string& s) {
    static const char* hex = "0123456789ABCDEF";
    std::string out;
    out.reserve(s.size());
    for (unsigned char c : s) {
        if (std::isalnum(c) || c == '-' || c == '.' || c == '_' || c == '~') {
            out += static_cast<char>(c);
        } else {
            out += '%';
            out += hex[c >> 4];
            out += hex[c & 0xF];
        }
    }
    return out;
}

std::string decode_url(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '%' && i + 2 < s.size() && std::isxdigit(static_cast<unsigned char>(s[i + 1])) &&
            std::isxdigit(static_cast<unsigned char>(s[i + 2]))) {
            out += static_cast<char>(std::stoi(s.substr(i + 1, 2), nullptr, 16));
            i += 2;
        } else if (s[i] == '+') {
            out += ' ';
        } else {
            out += s[i];
        }
    }
    return out;
}

namespace {

std::string canonical_base(const ParsedUrl& p) {
    std::string o = p.scheme.empty() ? "" : p.scheme + "://" + p.host;
    if (p.port != 0 && p.port != default_port(p.scheme)) o += ":" + std::to_string(p.port);
    return o + p.path;
}

}  // namespace

std::string normalize_url(const std::string& url, const Params& extra_params) {
    auto p = parse_url(url);
    Params params = parse_query(p.query);
    params.insert(params.end(), extra_params.begin(), extra_params.end());
    std::stable_sort(params.begin(), params.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    std::string out = canonical_base(p);
    if (!params.empty()) out += "?" + build_query(params);
    return out;
}

std::string normalize_base(const std::string& url) { return canonical_base(parse_url(url)); }

}  // namespace mst
