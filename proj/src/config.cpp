#include "mst/config.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace mst {

NLOHMANN_JSON_SERIALIZE_ENUM(Channel, {{Channel::Http, "http"}, {Channel::Https, "https"}})
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(User, username, password, role, id)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(SutConfig, secure_base, insecure_base, reset_endpoint,
                                                default_channel, insecure_tls, stateless, reset_before_mr,
                                                timeout_ms)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(LoginConfig, path, user_field, password_field)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(WebConfig, similarity_threshold, error_pattern, alert_marker,
                                                scrub_patterns, login_pattern, signup_pattern,
                                                reset_password_pattern, user_field_pattern,
                                                password_field_pattern, supervisors)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(CrawlConfig, max_states, max_ms, form_defaults, default_value,
                                                include_anonymous)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(CampaignConfig, sut, login, web, crawl, credentials, extra_users,
                                                file_paths, admin_paths, log_paths, payload_dir, scripts, seed,
                                                parallelism, random_budget, mr_time_budget_ms,
                                                max_loop_iterations)

std::string config_to_json(const CampaignConfig& cfg) { return nlohmann::json(cfg).dump(2) + "\n"; }

CampaignConfig config_from_json(const std::string& text) {
    try {
        auto cfg = nlohmann::json::parse(text).get<CampaignConfig>();
        validate(cfg);
        return cfg;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("invalid config: ") + e.what());
    }
}

void apply_environment(CampaignConfig& cfg) {
    const char* seed = std::getenv("MST_SEED");
    if (!seed || !*seed) return;
    try {
        std::size_t used = 0;
        auto v = std::stoull(seed, &used);
        if (used != std::string(seed).size()) throw std::invalid_argument(seed);
        cfg.seed = v;
    } catch (const std::exception&) {
        throw ConfigError(std::string("MST_SEED is not an unsigned integer: ") + seed);
    }
}

CampaignConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    CampaignConfig cfg;
    try {
        cfg = config_from_json(ss.str());
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
    apply_environment(cfg);
    namespace fs = std::filesystem;
    fs::path base = fs::path(path).parent_path();
    auto resolve = [&](std::string& p) {
        if (!p.empty() && fs::path(p).is_relative()) p = (base / p).lexically_normal().string();
    };
    resolve(cfg.payload_dir);
    for (auto& s : cfg.scripts) resolve(s);
    return cfg;
}

void save_config(const CampaignConfig& cfg, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write config file " + path);
    out << config_to_json(cfg);
}

void validate(const CampaignConfig& cfg) {
    if (!(cfg.web.similarity_threshold > 0.0 && cfg.web.similarity_threshold < 1.0))
        throw ConfigError("web.similarity_threshold must lie in (0,1)");
    if (cfg.credentials.empty() && !cfg.crawl.include_anonymous)
        throw ConfigError("at least one credential or the anonymous user is required");
    for (const auto& u : cfg.credentials)
        if (u.username.empty()) throw ConfigError("credential with empty username");
    for (std::size_t i = 0; i < cfg.credentials.size(); ++i)
        for (std::size_t j = i + 1; j < cfg.credentials.size(); ++j)
            if (cfg.credentials[i].id == cfg.credentials[j].id)
                throw ConfigError("duplicate user id '" + cfg.credentials[i].id + "'");
    if (cfg.parallelism < 1) throw ConfigError("parallelism must be at least 1");
    if (cfg.random_budget < 1) throw ConfigError("random_budget must be at least 1");
    if (cfg.sut.secure_base.empty()) throw ConfigError("sut.secure_base is required");
}

const User* find_credential(const CampaignConfig& cfg, const std::string& username) {
    for (const auto& u : cfg.credentials)
        if (u.username == username) return &u;
    return nullptr;
}

}  // namespace mst
