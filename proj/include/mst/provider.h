#pragma once

// Collected data and payload catalogs exposed through circular views.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "mst/config.h"
#include "mst/crawl_session.h"
#include "mst/model.h"
#include "mst/payloads.h"
#include "mst/smrl/analysis.h"

namespace mst {

class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using RandomScalar = std::variant<bool, std::int64_t, std::string>;

class DataProvider {
public:
    using Kind = smrl::DataKind;

    DataProvider() = default;
    explicit DataProvider(const CampaignConfig& cfg);

    void add_session(const CrawlSession& s);
    void add_script_input(InputSequence seq);
    void add_input(InputSequence seq);
    /// Extra user, listed after every user seen in a sequence.
    void add_user(const User& u);
    void set_texts(Kind kind, std::vector<std::string> items);
    void set_payloads(const PayloadCatalogs& payloads);
    void set_random_budget(int budget) { random_budget_ = budget; }
    void set_seed(std::uint64_t seed) { seed_ = seed; }
    void set_web_config(const WebConfig& cfg) { web_ = cfg; }

    std::size_t item_count(Kind kind) const;
    /// Views of a kind: its item count, or the budget for RandomValue.
    std::size_t view_count(Kind kind) const;

    /// Iteration idiom: `while (has_more_views(k)) { next_view(k); ... }`.
    /// Returning false also rewinds the kind for the next enclosing loop.
    bool has_more_views(Kind kind);
    void next_view(Kind kind);
    std::size_t offset(Kind kind) const;
    void reset_views();

    /// Storage index of the 1-based item `i` in the current view.
    std::size_t index_of(Kind kind, std::int64_t i) const;

    std::shared_ptr<const InputSequence> input(std::int64_t i) const;
    const User& user(std::int64_t i) const;
    const Action& action(Kind kind, std::int64_t i) const;
    const std::string& text(Kind kind, std::int64_t i) const;
    /// Value of the current RandomValue view for "String", "Int" or "Boolean".
    RandomScalar random_value(const std::string& type_name) const;
    static RandomScalar random_value(const std::string& type_name, std::size_t i, std::uint64_t seed);

    const std::vector<std::shared_ptr<const InputSequence>>& inputs() const { return inputs_; }
    const std::vector<User>& users() const { return users_; }
    const CrawlIndex& crawl() const { return crawl_; }
    const WebConfig& web() const { return web_; }

    /// First login action of any collected sequence.
    std::optional<Action> login_template() const;

private:
    struct ViewState {
        std::size_t offset = 0;
        std::size_t consumed = 0;
    };

    void index_actions(const InputSequence& seq);
    void add_sequence_user(const User& u);

    WebConfig web_;
    std::vector<std::shared_ptr<const InputSequence>> inputs_;
    std::vector<User> users_;
    std::size_t sequence_users_ = 0;
    std::vector<Action> actions_;
    std::vector<Action> actions_without_login_;
    std::map<Kind, std::vector<std::string>> texts_;
    CrawlIndex crawl_;
    std::map<Kind, ViewState> views_;
    int random_budget_ = 100;
    std::uint64_t seed_ = 1;
};

/// Provider loaded from crawl-session files and script files, with the
/// configured users, path manifests and payload catalogs.
DataProvider load_collected_data(const CampaignConfig& cfg, const std::vector<std::string>& session_paths,
                                 const std::vector<std::string>& script_paths);

}  // namespace mst
