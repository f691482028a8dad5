#include "mst/provider.h"

#include <algorithm>
#include <functional>
#include <random>

#include "mst/script.h"
#include "mst/web_utils.h"

namespace mst {

using smrl::DataKind;

DataProvider::DataProvider(const CampaignConfig& cfg) : web_(cfg.web), random_budget_(cfg.random_budget), seed_(cfg.seed) {
    for (const auto& u : cfg.extra_users) add_user(u);
    set_texts(DataKind::RandomFilePath, cfg.file_paths);
    set_texts(DataKind::RandomAdminFilePath, cfg.admin_paths);
    set_texts(DataKind::Log, cfg.log_paths);
    PayloadCatalogs payloads = PayloadCatalogs::defaults();
    payloads.load_dir(cfg.payload_dir);
    set_payloads(payloads);
}

void DataProvider::add_session(const CrawlSession& s) {
    crawl_.add_session(s);
    for (auto& seq : derive_source_inputs(s)) add_input(std::move(seq));
}

void DataProvider::add_script_input(InputSequence seq) {
    crawl_.add_sequence(seq);
    add_input(std::move(seq));
}

void DataProvider::add_input(InputSequence seq) {
    seq.renumber();
    for (const auto& a : seq.actions)
        if (a.is_web() && !a.user.is_anonymous()) add_sequence_user(a.user);
    index_actions(seq);
    inputs_.push_back(std::make_shared<const InputSequence>(std::move(seq)));
}

void DataProvider::index_actions(const InputSequence& seq) {
    bool logged_in = false;
    for (const auto& a : seq.actions) {
        if (!a.is_web()) continue;
        if (is_login(a, web_)) logged_in = true;
        actions_.push_back(a);
        if (!logged_in) actions_without_login_.push_back(a);
    }
}

void DataProvider::add_user(const User& u) {
    for (const auto& existing : users_)
        if (existing.username == u.username) return;
    users_.push_back(u);
}

void DataProvider::add_sequence_user(const User& u) {
    auto begin = users_.begin();
    auto split = begin + static_cast<std::ptrdiff_t>(sequence_users_);
    auto same = [&](const User& x) { return x.username == u.username; };
    if (std::find_if(begin, split, same) != split) return;
    auto extra = std::find_if(split, users_.end(), same);
    if (extra != users_.end()) users_.erase(extra);
    users_.insert(users_.begin() + static_cast<std::ptrdiff_t>(sequence_users_), u);
    ++sequence_users_;
}

void DataProvider::set_texts(Kind kind, std::vector<std::string> items) { texts_[kind] = std::move(items); }

void DataProvider::set_payloads(const PayloadCatalogs& payloads) {
    for (const auto& [name, items] : payloads.all())
        if (auto kind = smrl::data_kind_from_catalog(name)) set_texts(*kind, items);
}

std::size_t DataProvider::item_count(Kind kind) const {
    switch (kind) {
        case DataKind::Input: return inputs_.size();
        case DataKind::User: return users_.size();
        case DataKind::Action: return actions_.size();
        case DataKind::ActionAvailableWithoutLogin: return actions_without_login_.size();
        case DataKind::RandomValue: return static_cast<std::size_t>(random_budget_);
        case DataKind::Output:
        case DataKind::ParameterValueUsedByOtherUsers: return 0;
        default: {
            auto it = texts_.find(kind);
            return it == texts_.end() ? 0 : it->second.size();
        }
    }
}

std::size_t DataProvider::view_count(Kind kind) const {
    if (!smrl::is_enumerable(kind)) return 1;
    return item_count(kind);
}

bool DataProvider::has_more_views(Kind kind) {
    auto& v = views_[kind];
    if (v.consumed < view_count(kind)) return true;
    v.consumed = 0;
    return false;
}

void DataProvider::next_view(Kind kind) {
    auto& v = views_[kind];
    std::size_t n = view_count(kind);
    v.offset = n == 0 ? 0 : v.consumed % n;
    ++v.consumed;
}

std::size_t DataProvider::offset(Kind kind) const {
    auto it = views_.find(kind);
    return it == views_.end() ? 0 : it->second.offset;
}

void DataProvider::reset_views() { views_.clear(); }

std::size_t DataProvider::index_of(Kind kind, std::int64_t i) const {
    std::size_t n = item_count(kind);
    if (n == 0) throw DataError("no data for kind " + smrl::function_name(kind));
    if (i < 1) throw DataError(smrl::function_name(kind) + " index must be at least 1, got " + std::to_string(i));
    return (offset(kind) + static_cast<std::size_t>(i - 1)) % n;
}

std::shared_ptr<const InputSequence> DataProvider::input(std::int64_t i) const {
    return inputs_[index_of(DataKind::Input, i)];
}

const User& DataProvider::user(std::int64_t i) const { return users_[index_of(DataKind::User, i)]; }

const Action& DataProvider::action(Kind kind, std::int64_t i) const {
    if (kind == DataKind::ActionAvailableWithoutLogin) return actions_without_login_[index_of(kind, i)];
    return actions_[index_of(DataKind::Action, i)];
}

const std::string& DataProvider::text(Kind kind, std::int64_t i) const {
    std::size_t idx = index_of(kind, i);
    return texts_.at(kind)[idx];
}

RandomScalar DataProvider::random_value(const std::string& type_name) const {
    return random_value(type_name, offset(DataKind::RandomValue), seed_);
}

RandomScalar DataProvider::random_value(const std::string& type_name, std::size_t i, std::uint64_t seed) {
    if (type_name == "Boolean") return i % 2 == 0;
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(std::hash<std::string>{}(type_name))};
    std::mt19937_64 rng(seq);
    if (type_name == "Int" || type_name == "Integer" || type_name == "Long")
        return static_cast<std::int64_t>(std::uniform_int_distribution<std::int64_t>(-100000, 100000)(rng));
    if (type_name == "String") {
        static const char alphabet[] = "abcdefghijklmnopqrstuvwxyz0123456789";
        std::uniform_int_distribution<int> len(4, 12);
        std::uniform_int_distribution<int> pick(0, static_cast<int>(sizeof(alphabet)) - 2);
        std::string s;
        int n = len(rng);
        for (int k = 0; k < n; ++k) s += alphabet[pick(rng)];
        return s;
    }
    throw DataError("RandomValue does not support type '" + type_name + "'");
}

std::optional<Action> DataProvider::login_template() const {
    for (const auto& seq : inputs_)
        for (const auto& a : seq->actions)
            if (is_login(a, web_)) return a;
    return std::nullopt;
}

DataProvider load_collected_data(const CampaignConfig& cfg, const std::vector<std::string>& session_paths,
                                 const std::vector<std::string>& script_paths) {
    DataProvider p(cfg);
    for (const auto& path : session_paths) p.add_session(load_session(path));
    for (const auto& path : script_paths) p.add_script_input(load_script(path, cfg));
    return p;
}

}  // namespace mst
