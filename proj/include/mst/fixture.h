#pragma once

// Self-hosted demo web application with seeded flaws. Vulnerable mode
// enables every flaw, patched mode none; tests may pick an explicit set.

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mst/config.h"
#include "mst/model.h"

namespace mst {

enum class FixtureMode { Vulnerable, Patched };

enum class Flaw {
    InsecureLogin,       // /login accepted on the plaintext port
    SessionFixation,     // /signup keeps the caller's session id
    AdminBypass,         // /admin/config served to any authenticated user
    ReflectedXss,        // /search echoes q unescaped
    FileTraversal,       // /file serves any manifest path
    ProfileIdor,         // /profile serves any id
    TrustedCookie,       // /prefs trusts the `elevated` cookie
    IgnoredPasswordAge,  // no password-change demand after max age
};

std::set<Flaw> all_flaws();
std::string to_string(Flaw f);
FixtureMode fixture_mode_from_string(const std::string& s);

struct FixtureConfig {
    FixtureMode mode = FixtureMode::Patched;
    std::string host = "127.0.0.1";
    int port = 0;           // 0 = any free port
    int insecure_port = 0;  // 0 = any free port
    std::int64_t password_max_age_ms = 90LL * 24 * 60 * 60 * 1000;
    /// Overrides the flaw set implied by `mode`.
    std::optional<std::set<Flaw>> flaws;

    std::set<Flaw> active_flaws() const;
};

/// Built-in accounts (admin, devel, tester) with their passwords.
std::vector<User> fixture_users();

/// Paths of every file served by /file, admin files first.
std::vector<std::string> fixture_file_paths();

class FixtureServer {
public:
    explicit FixtureServer(FixtureConfig cfg);
    ~FixtureServer();
    FixtureServer(const FixtureServer&) = delete;
    FixtureServer& operator=(const FixtureServer&) = delete;

    /// Binds both ports and serves from background threads.
    void start();
    void stop();
    /// Blocks until stop() is called from another thread.
    void wait();

    int port() const;
    int insecure_port() const;
    std::string secure_base() const;
    std::string insecure_base() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Campaign settings matching a running fixture.
CampaignConfig fixture_campaign(const FixtureServer& server);

}  // namespace mst
