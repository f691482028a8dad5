#pragma once

// HTML-level crawler: explores the SUT as one user by following anchors and
// submitting forms, grouping pages into states by edit distance.

#include <cstdint>
#include <stdexcept>
#include <string>

#include "mst/config.h"
#include "mst/crawl_session.h"
#include "mst/transport.h"

namespace mst {

class CrawlError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct CrawlBudget {
    int max_states = 60;
    std::int64_t max_ms = 120000;
};

/// Id of the first state whose body lies within `threshold` x page length
/// of `body`; a new state is appended when none does.
int classify_state(CrawlSession& session, const std::string& url, const std::string& body, double threshold);

/// Crawls the SUT as `user` (anonymous when the username is empty). A login
/// that fails is recorded and the crawl continues anonymously. Throws
/// CrawlError when the SUT cannot be reached.
CrawlSession crawl(const CampaignConfig& cfg, const User& user, Transport& transport, CrawlBudget budget);

inline CrawlBudget budget_of(const CrawlConfig& c) { return {c.max_states, c.max_ms}; }

}  // namespace mst
