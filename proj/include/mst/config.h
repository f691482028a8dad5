#pragma once

// Campaign configuration: SUT endpoints, credentials, comparison and
// detection patterns, crawl budget and engine settings. Stored as JSON.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mst/model.h"

namespace mst {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SutConfig {
    std::string secure_base = "http://127.0.0.1:8080";
    /// Base URL used for actions whose channel is http; defaults to
    /// secure_base when empty.
    std::string insecure_base;
    std::string reset_endpoint = "/__test__/reset";
    Channel default_channel = Channel::Https;
    bool insecure_tls = false;
    bool stateless = false;
    bool reset_before_mr = true;
    int timeout_ms = 10000;

    bool operator==(const SutConfig&) const = default;
};

struct LoginConfig {
    std::string path = "/login";
    std::string user_field = "user";
    std::string password_field = "pass";

    bool operator==(const LoginConfig&) const = default;
};

struct WebConfig {
    double similarity_threshold = 0.05;
    std::string error_pattern = "(?i)error|denied";
    std::string alert_marker = "alert\\(";
    /// Regexes whose matches are removed from bodies before comparison.
    std::vector<std::string> scrub_patterns;
    std::string login_pattern = "(?i)login|signin|logon";
    std::string signup_pattern = "(?i)signup|register";
    std::string reset_password_pattern = "(?i)reset.?password|forgot";
    std::string user_field_pattern = "(?i)user|login|email";
    std::string password_field_pattern = "(?i)pass";
    /// (supervisor username, supervised username)
    std::vector<std::pair<std::string, std::string>> supervisors;

    bool operator==(const WebConfig&) const = default;
};

struct CrawlConfig {
    int max_states = 60;
    std::int64_t max_ms = 120000;
    /// (field-name regex, value) tried in order when filling forms.
    std::vector<std::pair<std::string, std::string>> form_defaults;
    std::string default_value = "test";
    bool include_anonymous = true;

    bool operator==(const CrawlConfig&) const = default;
};

struct CampaignConfig {
    SutConfig sut;
    LoginConfig login;
    WebConfig web;
    CrawlConfig crawl;
    std::vector<User> credentials;
    /// Users offered through User(i) even if they never appear in a
    /// collected sequence.
    std::vector<User> extra_users;
    std::vector<std::string> file_paths;
    std::vector<std::string> admin_paths;
    std::vector<std::string> log_paths;
    std::string payload_dir;
    std::vector<std::string> scripts;
    std::uint64_t seed = 1;
    int parallelism = 1;
    int random_budget = 100;
    std::int64_t mr_time_budget_ms = 0;  // 0 = unlimited
    std::int64_t max_loop_iterations = 1000000;

    bool operator==(const CampaignConfig&) const = default;
};

std::string config_to_json(const CampaignConfig& cfg);
CampaignConfig config_from_json(const std::string& text);

/// Reads the file, applies MST_SEED and resolves relative payload_dir and
/// script paths against the file's directory.
CampaignConfig load_config(const std::string& path);
void save_config(const CampaignConfig& cfg, const std::string& path);

/// Overrides cfg.seed from MST_SEED when set. Throws ConfigError on a
/// malformed value.
void apply_environment(CampaignConfig& cfg);

void validate(const CampaignConfig& cfg);

/// Finds a configured credential by username.
const User* find_credential(const CampaignConfig& cfg, const std::string& username);

}  // namespace mst
