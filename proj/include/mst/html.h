#pragma once

// Tolerant extraction of the interactive elements the crawler follows.

#include <string>
#include <vector>

namespace mst {

struct HtmlLink {
    std::string href;
    std::string path;  // element descriptor, e.g. /html/a[2]
};

struct HtmlField {
    std::string name;
    std::string value;
    std::string type;
};

struct HtmlForm {
    std::string action;
    std::string method = "GET";
    std::vector<HtmlField> fields;
    bool has_button = false;
    std::string path;
};

struct PageElements {
    std::vector<HtmlLink> links;
    std::vector<HtmlForm> forms;
};

PageElements scan_page(const std::string& body);

std::string html_unescape(const std::string& s);
std::string html_escape(const std::string& s);

/// True iff some <script> element (raw, not entity-escaped) contains a
/// match of `marker_regex` (default "alert\\(").
bool contains_executable_alert(const std::string& body, const std::string& marker_regex = "alert\\(");

}  // namespace mst
