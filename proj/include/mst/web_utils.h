#pragma once

// Web-specific predicates and transformations available to relations, and
// the output-equality notion they rely on.

#include <regex>
#include <set>
#include <string>
#include <vector>

#include "mst/config.h"
#include "mst/crawl_session.h"
#include "mst/model.h"

namespace mst {

/// Compiled, per-thread cached regex. A leading "(?i)" selects
/// case-insensitive matching.
const std::regex& cached_regex(const std::string& pattern);
bool regex_search(const std::string& text, const std::string& pattern);

/// Body with every scrub-pattern match removed.
std::string scrub_body(const std::string& body, const WebConfig& cfg);

/// Edit distance of the scrubbed bodies within the similarity threshold.
bool outputs_equal(const WebOutput& a, const WebOutput& b, const WebConfig& cfg);

bool is_error(const WebOutput& o, const WebConfig& cfg);

InputSequence change_credentials(const InputSequence& seq, const User& u, const WebConfig& cfg);
InputSequence copy_action_to(const InputSequence& seq, std::size_t from, std::size_t to);

/// URL as a browser would request it: base URL plus encoded parameters.
std::string full_url(const Action& a);

/// Throws std::invalid_argument when no crawl data exists for u.
bool cannot_reach_through_gui(const CrawlIndex& crawl, const User& u, const std::string& url);
bool user_can_retrieve_content(const CrawlIndex& crawl, const User& u, const WebOutput& o, const WebConfig& cfg);

bool is_login(const Action& a, const WebConfig& cfg);
bool is_signup(const Action& a, const WebConfig& cfg);
bool is_reset_password(const Action& a, const WebConfig& cfg);
bool is_click_on_button(const Action& a);
bool contain_form_input(const Action& a);
/// Some action before `index` in `seq` is a login.
bool after_login(const InputSequence& seq, std::size_t index, const WebConfig& cfg);

/// Reflexive lookup in the configured supervisor pairs.
bool is_supervisor_of(const User& a, const User& b, const WebConfig& cfg);

/// Distinct values recorded for the same URL and parameter position by
/// users other than the action's user, in first-seen order.
std::vector<std::string> parameter_values_used_by_other_users(const CrawlIndex& crawl, const Action& a,
                                                              std::size_t par);

/// Remembers key tuples queried during one MR run.
class NotTriedStore {
public:
    /// True the first time a tuple is seen; the tuple is marked.
    bool check(const std::vector<std::string>& keys);
    bool contains(const std::vector<std::string>& keys) const { return seen_.count(keys) > 0; }
    void mark(const std::vector<std::string>& keys) { seen_.insert(keys); }
    std::size_t size() const { return seen_.size(); }

private:
    std::set<std::vector<std::string>> seen_;
};

std::string special_char_injection_beginning(const std::string& value, const std::string& ch);

/// "Boolean", "Int" or "String".
std::string type_of(const std::string& value);

}  // namespace mst
