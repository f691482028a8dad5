#include "mst/fixture.h"

#include <condition_variable>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "httplib.h"
#include "mst/html.h"

namespace mst {

std::set<Flaw> all_flaws() {
    return {Flaw::InsecureLogin, Flaw::SessionFixation, Flaw::AdminBypass,   Flaw::ReflectedXss,
            Flaw::FileTraversal, Flaw::ProfileIdor,     Flaw::TrustedCookie, Flaw::IgnoredPasswordAge};
}

std::string to_string(Flaw f) {
    switch (f) {
        case Flaw::InsecureLogin: return "insecure-login";
        case Flaw::SessionFixation: return "session-fixation";
        case Flaw::AdminBypass: return "admin-bypass";
        case Flaw::ReflectedXss: return "reflected-xss";
        case Flaw::FileTraversal: return "file-traversal";
        case Flaw::ProfileIdor: return "profile-idor";
        case Flaw::TrustedCookie: return "trusted-cookie";
        case Flaw::IgnoredPasswordAge: return "ignored-password-age";
    }
    return "?";
}

FixtureMode fixture_mode_from_string(const std::string& s) {
    if (s == "vulnerable") return FixtureMode::Vulnerable;
    if (s == "patched") return FixtureMode::Patched;
    throw std::invalid_argument("unknown fixture mode '" + s + "' (vulnerable|patched)");
}

std::set<Flaw> FixtureConfig::active_flaws() const {
    if (flaws) return *flaws;
    return mode == FixtureMode::Vulnerable ? all_flaws() : std::set<Flaw>{};
}

std::vector<User> fixture_users() {
    return {{"admin", "admin-pw-1", "admin", "admin"},
            {"devel", "devel-pw-2", "developer", "devel"},
            {"tester", "tester-pw-3", "tester", "tester"}};
}

namespace {

struct StoredFile {
    std::string owner;
    std::string content;
};

const std::map<std::string, StoredFile>& file_table() {
    static const std::map<std::string, StoredFile> files = {
        {"/files/admin/settings.cfg",
         {"admin",
          "[mail] relay=smtp.internal.example port=2525 sender=robot@example.test; [backup] schedule=02:30 "
          "retention=35 days target=vault-7; [tokens] signing-key-id=kid-4471 rotation=quarterly; maintenance "
          "window on the first Sunday of each month between 01:00 and 03:00 UTC."}},
        {"/files/admin/audit.log",
         {"admin",
          "2026-01-03 user devel promoted build 1842 to staging; 2026-01-04 user tester filed defect 311 "
          "against checkout; 2026-01-06 configuration snapshot archived as snap-0xa9; 2026-01-09 quota of "
          "project atlas raised from 40 to 64 agents by the administrator."}},
        {"/files/devel/build-notes.txt",
         {"devel",
          "Build notes: the nightly pipeline compiles modules kestrel, plover and avocet with the pinned "
          "toolchain 12.4; flaky test suite plover-io is quarantined until the socket timeout fix lands; "
          "release candidate rc3 waits on a license review of the vendored zlib fork."}},
        {"/files/tester/test-plan.txt",
         {"tester",
          "Test plan for sprint 19: exploratory charter on the payment wizard, regression pack R-22 on the "
          "catalogue filters, accessibility audit of the onboarding tour and a soak test of the export job "
          "with eleven thousand records split over four hundred batches."}},
    };
    return files;
}

const std::map<std::string, std::string>& profile_table() {
    static const std::map<std::string, std::string> profiles = {
        {"admin",
         "Operations lead since 2019. Pager rota: weeks 2 and 4. Desk phone extension 4410, home office in "
         "Esch-sur-Alzette. Emergency contact stored with the facilities desk. Prefers written change "
         "requests with a rollback plan attached and signs off production releases."},
        {"devel",
         "Backend developer on the scheduling service. Maintains the kestrel and plover modules, reviews "
         "database migrations on Tuesdays and mentors two interns. Personal token suffix ends in 7d2e; "
         "vacation booked from the twelfth to the twenty-third of August."},
        {"tester",
         "Quality engineer for the storefront. Owns the regression packs, the nightly smoke suite and the "
         "device lab reservation calendar. Badge number 55-0913, parking slot C-18, allergic to peanuts as "
         "noted by the office manager for team events."},
    };
    return profiles;
}

const char* kFooter =
    "<div class=\"footer\"><p>Atlas Workbench is a small intranet portal used to demonstrate how automated "
    "security testing tools explore a web application. Every page shares this footer so that the visual "
    "structure stays stable from one request to the next. The portal offers a public front page, a short "
    "description of the project, a news search, a sign-up form for new team members and a login page for "
    "registered staff. After logging in, staff members reach a personal dashboard with links to their own "
    "profile and to the documents they maintain. Administrators additionally manage the portal configuration "
    "and personal preferences that affect the whole installation.</p><p>Content on this portal is "
    "fictitious. Names, numbers, schedules and notes were written for demonstration purposes and do not "
    "describe real people, systems or organisations. The portal keeps its data in memory and forgets all "
    "changes when it is restarted or when the maintenance endpoint restores the initial state. Opening hours "
    "of the help desk: Monday to Friday from nine to five. Questions about the portal can be sent to the "
    "workbench team through the usual internal channels.</p></div>";

std::string page(const std::string& title, const std::string& main) {
    return "<!DOCTYPE html><html><head><title>" + title +
           "</title></head><body><div class=\"nav\"><a href=\"/\">Front page</a> | <a href=\"/about\">About "
           "Atlas</a></div><div class=\"main\"><h1>" +
           title + "</h1>" + main + "</div>" + kFooter + "</body></html>";
}

struct Account {
    std::string username;
    std::string role;
};

struct State {
    std::mutex mu;
    std::map<std::string, Account> sessions;  // sid -> account
    std::map<std::string, std::string> registered;
    std::vector<std::string> queue;
    std::uint64_t next_sid = 0;

    void reset() {
        sessions.clear();
        registered.clear();
        queue.clear();
        next_sid = 0;
    }

    std::string new_sid() { return "S" + std::to_string(1000 + ++next_sid) + "x"; }
};

std::string cookie_value(const httplib::Request& req, const std::string& name) {
    std::string header = req.get_header_value("Cookie");
    Session s = Session::parse_cookie_header(header);
    return s.get(name).value_or("");
}

}  // namespace

struct FixtureServer::Impl {
    FixtureConfig cfg;
    std::set<Flaw> flaws;
    State state;
    httplib::Server secure;
    httplib::Server insecure;
    std::thread secure_thread;
    std::thread insecure_thread;
    int secure_port = 0;
    int plain_port = 0;
    bool running = false;
    std::mutex run_mu;
    std::condition_variable stopped_cv;

    explicit Impl(FixtureConfig c) : cfg(std::move(c)), flaws(cfg.active_flaws()) {}

    bool has(Flaw f) const { return flaws.count(f) > 0; }

    static void html(httplib::Response& res, int status, const std::string& body) {
        res.status = status;
        res.set_content(body, "text/html; charset=utf-8");
    }

    static void redirect(httplib::Response& res, const std::string& to) {
        res.status = 302;
        res.set_header("Location", to);
        res.set_content("", "text/html");
    }

    static void forbidden(httplib::Response& res) {
        html(res, 403,
             page("Access denied",
                  "<p>Access denied. Your account does not have the permission required for this page. Ask an "
                  "administrator if you believe this restriction is a mistake.</p>"));
    }

    static void not_found(httplib::Response& res) {
        html(res, 404,
             page("Not found",
                  "<p>Error 404: the requested resource does not exist on this portal. Check the address or "
                  "go back to the front page.</p>"));
    }

    std::optional<Account> account_of(const httplib::Request& req) {
        auto it = state.sessions.find(cookie_value(req, "sid"));
        if (it == state.sessions.end()) return std::nullopt;
        return it->second;
    }

    static std::int64_t clock_offset(const httplib::Request& req) {
        std::string v = req.get_header_value("X-MST-Clock-Offset-Ms");
        if (v.empty()) return 0;
        try {
            return std::stoll(v);
        } catch (...) {
            return 0;
        }
    }

    void handle(const httplib::Request& req, httplib::Response& res, bool plaintext) {
        std::lock_guard<std::mutex> lock(state.mu);
        const std::string& path = req.path;
        bool post = req.method == "POST";

        if (path == "/__test__/reset") {
            state.reset();
            html(res, 200, "reset");
            return;
        }
        if (path == "/login" && post) return login(req, res, plaintext);

        auto acct = account_of(req);
        if (acct && !has(Flaw::IgnoredPasswordAge) && clock_offset(req) >= cfg.password_max_age_ms &&
            acct->role != "member") {
            html(res, 200,
                 page("Password expired",
                      "<p>Your password is older than the maximum age allowed by the portal policy. Choose a new "
                      "password before you continue working.</p><form method=\"post\" "
                      "action=\"/password\"><input type=\"password\" name=\"new_pass\"><button "
                      "type=\"submit\">Change password</button></form>"));
            return;
        }

        if (path == "/") return front(res);
        if (path == "/about") return about(res);
        if (path == "/login") return login_form(res);
        if (path == "/signup") return post ? signup(req, res) : signup_form(res);
        if (path == "/search") return search(req, res);
        if (path == "/home") return home(res, acct);
        if (path == "/profile") return profile(req, res, acct);
        if (path == "/file") return file(req, res, acct);
        if (path == "/admin/config") return admin_config(res, acct);
        if (path == "/prefs" && post) return prefs(req, res, acct);
        if (path == "/queue/enqueue" || path == "/queue/cancel") return queue(req, res, acct, path);
        not_found(res);
    }

    void front(httplib::Response& res) {
        html(res, 200,
             page("Atlas Workbench",
                  "<p>Welcome to the Atlas Workbench front page. Staff members log in to reach their dashboard; "
                  "visitors can read about the project or search the public news archive.</p><ul><li><a "
                  "href=\"/login\">Staff login</a></li><li><a href=\"/about\">About the project</a></li><li><a "
                  "href=\"/search?q=hello\">News search</a></li><li><a href=\"/signup\">Join the "
                  "team</a></li></ul>"));
    }

    void about(httplib::Response& res) {
        html(res, 200,
             page("About Atlas",
                  "<p>Atlas coordinates build agents, test plans and release notes for three internal product "
                  "lines. The workbench started as a weekend project in the platform team and grew into the "
                  "place where developers, testers and operators share schedules and documents.</p>"));
    }

    void login_form(httplib::Response& res) {
        html(res, 200,
             page("Staff login",
                  "<p>Enter the user name and password you received from the operations team. Sessions end "
                  "when the portal is restarted.</p><form method=\"post\" action=\"/login\"><input "
                  "name=\"user\"><input type=\"password\" name=\"pass\"><button "
                  "type=\"submit\">Log in</button></form>"));
    }

    void login(const httplib::Request& req, httplib::Response& res, bool plaintext) {
        if (plaintext && !has(Flaw::InsecureLogin)) {
            html(res, 403,
                 page("Access denied",
                      "<p>Access denied. Credentials are only accepted over the secure channel of the portal; "
                      "this plaintext endpoint refuses every login attempt.</p>"));
            return;
        }
        std::string user = req.get_param_value("user");
        std::string pass = req.get_param_value("pass");
        for (const auto& u : fixture_users()) {
            if (u.username != user || u.password != pass) continue;
            std::string sid = state.new_sid();
            state.sessions[sid] = {u.username, u.role};
            res.set_header("Set-Cookie", "sid=" + sid + "; Path=/");
            res.headers.emplace("Set-Cookie",
                                std::string("elevated=") + (u.role == "admin" ? "true" : "false") + "; Path=/");
            redirect(res, "/home");
            return;
        }
        html(res, 200,
             page("Login error",
                  "<p>Login error: the user name or the password is not valid. Accounts created through the "
                  "sign-up form must be approved before they can log in here.</p><p><a href=\"/login\">Try "
                  "again</a></p>"));
    }

    void signup_form(httplib::Response& res) {
        html(res, 200,
             page("Join the team",
                  "<p>New team members register here. The operations team reviews every request within two "
                  "working days and assigns the matching role.</p><form method=\"post\" "
                  "action=\"/signup\"><input name=\"new_user\"><input type=\"password\" "
                  "name=\"new_pass\"><button type=\"submit\">Sign up</button></form>"));
    }

    void signup(const httplib::Request& req, httplib::Response& res) {
        std::string user = req.get_param_value("new_user");
        std::string pass = req.get_param_value("new_pass");
        if (user.empty() || pass.empty()) {
            html(res, 400,
                 page("Sign-up error",
                      "<p>Sign-up error: both a user name and a password are required to register.</p>"));
            return;
        }
        state.registered[user] = pass;
        std::string sid = cookie_value(req, "sid");
        bool known = state.sessions.count(sid) > 0;
        if (has(Flaw::SessionFixation) && known) {
            state.sessions[sid] = {user, "member"};
        } else {
            if (known) state.sessions.erase(sid);
            sid = state.new_sid();
            state.sessions[sid] = {user, "member"};
            res.set_header("Set-Cookie", "sid=" + sid + "; Path=/");
        }
        html(res, 200,
             page("Registration received",
                  "<p>Thank you for registering. Your request is waiting for approval by the operations team; "
                  "you will receive a message once a role has been assigned to the new account.</p>"));
    }

    void search(const httplib::Request& req, httplib::Response& res) {
        std::string q = req.get_param_value("q");
        std::string shown = has(Flaw::ReflectedXss) ? q : html_escape(q);
        html(res, 200,
             page("News search",
                  "<p>Results for: " + shown +
                      "</p><p>No news items matched the query. The archive covers announcements from the last "
                      "three years; older items are kept by the communications office.</p>"));
    }

    void home(httplib::Response& res, const std::optional<Account>& acct) {
        if (!acct) return redirect(res, "/login");
        std::string links = "<ul>";
        if (profile_table().count(acct->username))
            links += "<li><a href=\"/profile?id=" + acct->username + "\">My profile</a></li>";
        for (const auto& [path, f] : file_table())
            if (f.owner == acct->username) links += "<li><a href=\"/file?path=" + path + "\">" + path + "</a></li>";
        links += "<li><a href=\"/search?q=hello\">News search</a></li>";
        std::string intro;
        if (acct->role == "admin") {
            links += "<li><a href=\"/admin/config\">Portal configuration</a></li>";
            intro = "<p>Administrator dashboard. Review the portal configuration, the audit trail and the "
                    "settings that apply to every team.</p>";
        } else if (acct->role == "developer") {
            intro = "<p>Developer dashboard. Your build notes and the module ownership list are linked below; "
                    "the nightly pipeline status is refreshed every hour.</p>";
        } else if (acct->role == "tester") {
            intro = "<p>Tester dashboard. Your current test plan and the device lab calendar are linked below; "
                    "regression results are published every morning.</p>";
        } else {
            intro = "<p>Member dashboard. Your account is waiting for a role; until then only the public "
                    "pages are available.</p>";
        }
        links += "</ul>";
        if (acct->role == "admin")
            links += "<form method=\"post\" action=\"/prefs\"><input name=\"theme\" value=\"dark\"><button "
                     "type=\"submit\">Save preferences</button></form>";
        html(res, 200, page("Dashboard", intro + links));
    }

    void profile(const httplib::Request& req, httplib::Response& res, const std::optional<Account>& acct) {
        std::string id = req.get_param_value("id");
        auto it = profile_table().find(id);
        if (it == profile_table().end()) return not_found(res);
        if (!has(Flaw::ProfileIdor) && (!acct || acct->username != id)) return forbidden(res);
        html(res, 200, page("Staff profile", "<p>" + it->second + "</p>"));
    }

    void file(const httplib::Request& req, httplib::Response& res, const std::optional<Account>& acct) {
        std::string path = req.get_param_value("path");
        auto it = file_table().find(path);
        if (it == file_table().end()) return not_found(res);
        if (!has(Flaw::FileTraversal) && (!acct || acct->username != it->second.owner)) return forbidden(res);
        html(res, 200, page("Document viewer", "<pre>" + it->second.content + "</pre>"));
    }

    void admin_config(httplib::Response& res, const std::optional<Account>& acct) {
        if (!acct) return redirect(res, "/login");
        if (!has(Flaw::AdminBypass) && acct->role != "admin") return forbidden(res);
        html(res, 200,
             page("Portal configuration",
                  "<table><tr><td>Agents per project</td><td>64</td></tr><tr><td>Session lifetime</td><td>8 "
                  "hours</td></tr><tr><td>Self registration</td><td>enabled, manual approval</td></tr><tr><td>"
                  "Password maximum age</td><td>90 days</td></tr><tr><td>Audit retention</td><td>400 "
                  "days</td></tr></table>"));
    }

    void prefs(const httplib::Request& req, httplib::Response& res, const std::optional<Account>& acct) {
        if (!acct) return forbidden(res);
        bool allowed = has(Flaw::TrustedCookie) ? cookie_value(req, "elevated") == "true" : acct->role == "admin";
        if (!allowed) return forbidden(res);
        html(res, 200,
             page("Preferences saved",
                  "<p>The installation-wide preferences were stored. Theme, default landing page and "
                  "notification digest now apply to every team that uses the workbench.</p>"));
    }

    void queue(const httplib::Request& req, httplib::Response& res, const std::optional<Account>& acct,
               const std::string& path) {
        if (!acct) return redirect(res, "/login");
        std::string item = req.get_param_value("item");
        if (path == "/queue/enqueue") {
            state.queue.push_back(item);
            html(res, 200,
                 page("Job queued",
                      "<p>The job was added to the build queue. Agents pick up queued jobs in submission order "
                      "as soon as capacity becomes available.</p>"));
        } else {
            std::erase(state.queue, item);
            html(res, 200,
                 page("Job cancelled",
                      "<p>The queued job was withdrawn. Cancelled jobs stay visible in the audit trail for the "
                      "configured retention period.</p>"));
        }
    }

    void install(httplib::Server& srv, bool plaintext) {
        auto h = [this, plaintext](const httplib::Request& req, httplib::Response& res) {
            handle(req, res, plaintext);
        };
        srv.Get(".*", h);
        srv.Post(".*", h);
    }
};

FixtureServer::FixtureServer(FixtureConfig cfg) : impl_(std::make_unique<Impl>(std::move(cfg))) {
    impl_->install(impl_->secure, false);
    impl_->install(impl_->insecure, true);
}

FixtureServer::~FixtureServer() { stop(); }

void FixtureServer::start() {
    auto& i = *impl_;
    std::lock_guard<std::mutex> lock(i.run_mu);
    if (i.running) return;
    auto bind = [&](httplib::Server& srv, int want) {
        int port = want == 0 ? srv.bind_to_any_port(i.cfg.host) : (srv.bind_to_port(i.cfg.host, want) ? want : -1);
        if (port <= 0) throw std::runtime_error("cannot bind fixture port " + std::to_string(want));
        return port;
    };
    i.secure_port = bind(i.secure, i.cfg.port);
    i.plain_port = bind(i.insecure, i.cfg.insecure_port);
    i.secure_thread = std::thread([&i] { i.secure.listen_after_bind(); });
    i.insecure_thread = std::thread([&i] { i.insecure.listen_after_bind(); });
    i.secure.wait_until_ready();
    i.insecure.wait_until_ready();
    i.running = true;
}

void FixtureServer::stop() {
    auto& i = *impl_;
    std::lock_guard<std::mutex> lock(i.run_mu);
    if (!i.running) return;
    i.secure.stop();
    i.insecure.stop();
    if (i.secure_thread.joinable()) i.secure_thread.join();
    if (i.insecure_thread.joinable()) i.insecure_thread.join();
    i.running = false;
    i.stopped_cv.notify_all();
}

void FixtureServer::wait() {
    auto& i = *impl_;
    std::unique_lock<std::mutex> lock(i.run_mu);
    i.stopped_cv.wait(lock, [&i] { return !i.running; });
}

int FixtureServer::port() const { return impl_->secure_port; }
int FixtureServer::insecure_port() const { return impl_->plain_port; }

std::string FixtureServer::secure_base() const {
    return "http://" + impl_->cfg.host + ":" + std::to_string(impl_->secure_port);
}

std::string FixtureServer::insecure_base() const {
    return "http://" + impl_->cfg.host + ":" + std::to_string(impl_->plain_port);
}

std::vector<std::string> fixture_file_paths() {
    return {"/files/admin/settings.cfg", "../../../../etc/passwd", "/files/devel/build-notes.txt",
            "/files/tester/test-plan.txt", "/files/admin/audit.log"};
}

CampaignConfig fixture_campaign(const FixtureServer& server) {
    CampaignConfig cfg;
    cfg.sut.secure_base = server.secure_base();
    cfg.sut.insecure_base = server.insecure_base();
    cfg.credentials = fixture_users();
    for (const auto& u : cfg.credentials) cfg.web.supervisors.emplace_back(u.username, "anonymous");
    cfg.file_paths = fixture_file_paths();
    cfg.admin_paths = {"/admin/config", "/admin/users", "/admin/backup"};
    cfg.log_paths = {"/files/admin/audit.log", "/var/log/atlas/access.log", "/logs/today"};
    return cfg;
}

}  // namespace mst
