#pragma once

// Per-user crawl results, their persisted JSON form, and the read-only
// index web utilities query (reachable URLs, retrieved contents, parameter
// values observed per user).

#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "mst/model.h"

namespace mst {

class LoadError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct CrawlState {
    int id = 0;
    std::string url;
    std::string body;
    bool operator==(const CrawlState&) const = default;
};

struct CrawlEdge {
    int id = 0;
    /// -1 for the entry edge that leads to the root state.
    int from = -1;
    int to = 0;
    Action action;
    WebOutput output;
    bool operator==(const CrawlEdge&) const = default;
};

struct CrawlSession {
    User user;
    std::string timestamp;
    std::string sut;
    std::vector<CrawlState> states;
    std::vector<CrawlEdge> edges;  // edges[0] is the entry edge
    int root_state = 0;
    /// Normalized URLs the user met in the GUI: requested URLs plus the
    /// targets of anchors and forms on every page seen.
    std::vector<std::string> gui_urls;
    /// Source inputs as edge-id lists, entry edge first.
    std::vector<std::vector<int>> derived_inputs;
    std::int64_t budget_spent_ms = 0;
    bool login_failed = false;
    bool operator==(const CrawlSession&) const = default;
};

/// Edge-id lists for every root-to-leaf path of the DFS tree, each
/// prefixed with the entry edge.
std::vector<std::vector<int>> derive_paths(const CrawlSession& s);

/// One sequence per derived input; ids are "<username>#<k>".
std::vector<InputSequence> derive_source_inputs(const CrawlSession& s);

std::string session_to_json(const CrawlSession& s);
CrawlSession session_from_json(const std::string& text, const std::string& origin_name = "<memory>");
void save_session(const CrawlSession& s, const std::string& path);
CrawlSession load_session(const std::string& path);

std::string sequence_to_json(const InputSequence& s);
InputSequence sequence_from_json(const std::string& text);

struct CrawlIndex {
    struct ParamUse {
        std::string username;
        std::size_t index;
        std::string value;
    };

    std::map<std::string, std::set<std::string>> gui_urls;     // username -> normalized urls
    std::map<std::string, std::vector<std::string>> contents;  // username -> recorded bodies
    std::map<std::string, std::vector<ParamUse>> param_uses;   // normalized url -> uses

    void add_session(const CrawlSession& s);
    /// Records parameter values of a non-crawled sequence (scripts).
    void add_sequence(const InputSequence& seq);
    bool has_user(const std::string& username) const { return gui_urls.count(username) > 0; }
};

}  // namespace mst
