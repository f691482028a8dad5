#include <gtest/gtest.h>

#include "mst/executor.h"
#include "mst/fixture.h"
#include "mst/script.h"
#include "mst/web_utils.h"
#include "support.h"

using namespace mst;

namespace {

class Fixture {
public:
    explicit Fixture(FixtureMode mode) : server_(config(mode)) {
        server_.start();
        cfg = fixture_campaign(server_);
        transport_ = std::make_unique<HttpTransport>(cfg.sut.timeout_ms);
    }
    ~Fixture() {
        transport_.reset();
        server_.stop();
    }

    /// Output of the last action, after a reset.
    WebOutput last(std::vector<Action> actions) {
        Executor ex(cfg.sut, cfg.web, *transport_);
        ex.reset_sut();
        InputSequence seq = make_sequence(std::move(actions), Origin::Script);
        return *ex.output_of(seq, seq.size() - 1);
    }

    Action login(const std::string& name) { return make_login_action(*find_credential(cfg, name), cfg); }

    Action get(const std::string& target, Params params = {}) {
        Action a = Action::web("GET", cfg.sut.secure_base + target);
        a.parameters = std::move(params);
        return a;
    }

    Action post(const std::string& target, Params form = {}) {
        Action a = Action::web("POST", cfg.sut.secure_base + target);
        a.form_inputs = std::move(form);
        return a;
    }

    FixtureServer& server() { return server_; }

    CampaignConfig cfg;

private:
    static FixtureConfig config(FixtureMode mode) {
        FixtureConfig fc;
        fc.mode = mode;
        return fc;
    }

    FixtureServer server_;
    std::unique_ptr<HttpTransport> transport_;
};

bool contains(const std::string& s, const std::string& part) { return s.find(part) != std::string::npos; }

}  // namespace

TEST(FixtureConfig, ModesAndOverride) {
    FixtureConfig fc;
    EXPECT_TRUE(fc.active_flaws().empty());
    fc.mode = FixtureMode::Vulnerable;
    EXPECT_EQ(fc.active_flaws(), all_flaws());
    EXPECT_EQ(all_flaws().size(), 8u);
    fc.flaws = std::set<Flaw>{Flaw::ReflectedXss};
    EXPECT_EQ(fc.active_flaws().size(), 1u);
    EXPECT_EQ(fixture_mode_from_string("patched"), FixtureMode::Patched);
    EXPECT_EQ(fixture_mode_from_string("vulnerable"), FixtureMode::Vulnerable);
    EXPECT_THROW(fixture_mode_from_string("half"), std::invalid_argument);
}

TEST(FixtureServer, DistinctPortsAndCampaign) {
    Fixture f(FixtureMode::Patched);
    EXPECT_NE(f.server().port(), f.server().insecure_port());
    EXPECT_EQ(f.cfg.credentials.size(), 3u);
    EXPECT_EQ(f.cfg.file_paths, fixture_file_paths());
    EXPECT_NO_THROW(validate(f.cfg));
}

TEST(FixtureServer, ReflectedXss) {
    const std::string payload = "<SCRIPT>alert('XSS');</SCRIPT>";
    Fixture v(FixtureMode::Vulnerable);
    EXPECT_TRUE(contains(v.last({v.get("/search", {{"q", payload}})}).body, payload));
    Fixture p(FixtureMode::Patched);
    std::string body = p.last({p.get("/search", {{"q", payload}})}).body;
    EXPECT_FALSE(contains(body, payload));
    EXPECT_TRUE(contains(body, "&lt;SCRIPT&gt;"));
}

TEST(FixtureServer, AdminConfig) {
    Fixture p(FixtureMode::Patched);
    WebOutput denied = p.last({p.login("tester"), p.get("/admin/config")});
    EXPECT_EQ(denied.status, 403);
    EXPECT_TRUE(is_error(denied, p.cfg.web));
    EXPECT_FALSE(is_error(p.last({p.login("admin"), p.get("/admin/config")}), p.cfg.web));
    EXPECT_TRUE(contains(p.last({p.get("/admin/config")}).body, "Staff login"));

    Fixture v(FixtureMode::Vulnerable);
    WebOutput served = v.last({v.login("tester"), v.get("/admin/config")});
    EXPECT_EQ(served.status, 200);
    EXPECT_FALSE(is_error(served, v.cfg.web));
}

TEST(FixtureServer, LoginOverPlaintextPort) {
    for (auto mode : {FixtureMode::Patched, FixtureMode::Vulnerable}) {
        Fixture f(mode);
        Action login = f.login("devel");
        login.channel = Channel::Http;
        WebOutput out = f.last({login});
        if (mode == FixtureMode::Patched) {
            EXPECT_EQ(out.status, 403);
            EXPECT_FALSE(out.session.get("sid").has_value());
        } else {
            EXPECT_EQ(out.status, 200);
            EXPECT_TRUE(contains(out.body, "Developer dashboard"));
        }
    }
}

TEST(FixtureServer, WrongPasswordIsLoginError) {
    Fixture f(FixtureMode::Vulnerable);
    Action a = f.login("devel");
    a.form_inputs[1].second = "nope";
    WebOutput out = f.last({a});
    EXPECT_TRUE(is_error(out, f.cfg.web));
    EXPECT_TRUE(out.session.empty());
}

TEST(FixtureServer, SignupSessionRotation) {
    for (auto mode : {FixtureMode::Patched, FixtureMode::Vulnerable}) {
        Fixture f(mode);
        WebOutput before = f.last({f.login("devel")});
        WebOutput after = f.last({f.login("devel"), f.post("/signup", {{"new_user", "neo"}, {"new_pass", "pw"}})});
        ASSERT_TRUE(before.session.get("sid").has_value());
        if (mode == FixtureMode::Vulnerable)
            EXPECT_EQ(after.session.get("sid"), before.session.get("sid"));
        else
            EXPECT_NE(after.session.get("sid"), before.session.get("sid"));
        EXPECT_EQ(f.last({f.post("/signup", {{"new_user", ""}, {"new_pass", "pw"}})}).status, 400);
    }
}

TEST(FixtureServer, FileAndProfileAccess) {
    const std::string admin_file = fixture_file_paths().front();
    Fixture p(FixtureMode::Patched);
    EXPECT_EQ(p.last({p.login("tester"), p.get("/file", {{"path", admin_file}})}).status, 403);
    EXPECT_EQ(p.last({p.login("admin"), p.get("/file", {{"path", admin_file}})}).status, 200);
    EXPECT_EQ(p.last({p.login("tester"), p.get("/profile", {{"id", "admin"}})}).status, 403);
    EXPECT_EQ(p.last({p.login("tester"), p.get("/profile", {{"id", "tester"}})}).status, 200);
    EXPECT_EQ(p.last({p.get("/file", {{"path", "../../../../etc/passwd"}})}).status, 404);

    Fixture v(FixtureMode::Vulnerable);
    EXPECT_EQ(v.last({v.login("tester"), v.get("/file", {{"path", admin_file}})}).status, 200);
    EXPECT_EQ(v.last({v.login("tester"), v.get("/profile", {{"id", "admin"}})}).status, 200);
}

TEST(FixtureServer, PrefsCookieTrust) {
    for (auto mode : {FixtureMode::Patched, FixtureMode::Vulnerable}) {
        Fixture f(mode);
        WebOutput admin = f.last({f.login("admin"), f.post("/prefs", {{"theme", "dark"}})});
        WebOutput tester = f.last({f.login("tester"), f.post("/prefs", {{"theme", "dark"}})});
        EXPECT_EQ(admin.status, 200);
        EXPECT_EQ(tester.status, 403);
        ASSERT_EQ(tester.session.get("elevated"), "false");

        Session flipped = tester.session;
        flipped.set("elevated", "true");
        Action prefs = f.post("/prefs", {{"theme", "dark"}});
        prefs.session_override = flipped;
        WebOutput forged = f.last({f.login("tester"), prefs});
        if (mode == FixtureMode::Vulnerable) {
            EXPECT_FALSE(is_error(forged, f.cfg.web));
            EXPECT_TRUE(outputs_equal(forged, admin, f.cfg.web));
        } else {
            EXPECT_TRUE(is_error(forged, f.cfg.web));
        }
    }
}

TEST(FixtureServer, PasswordAge) {
    FixtureConfig fc;
    std::int64_t age = fc.password_max_age_ms;
    for (auto mode : {FixtureMode::Patched, FixtureMode::Vulnerable}) {
        Fixture f(mode);
        WebOutput fresh = f.last({f.login("devel"), Action::wait(age - 1), f.get("/home")});
        EXPECT_TRUE(contains(fresh.body, "Developer dashboard"));
        WebOutput old = f.last({f.login("devel"), Action::wait(age), f.get("/home")});
        EXPECT_EQ(contains(old.body, "Password expired"), mode == FixtureMode::Patched);
    }
}

TEST(FixtureServer, ResetIsIdempotent) {
    Fixture f(FixtureMode::Vulnerable);
    WebOutput first = f.last({f.login("devel")});
    HttpTransport t(f.cfg.sut.timeout_ms);
    Executor ex(f.cfg.sut, f.cfg.web, t);
    EXPECT_TRUE(ex.reset_sut());
    EXPECT_TRUE(ex.reset_sut());
    InputSequence again = make_sequence({f.login("devel")}, Origin::Script);
    EXPECT_EQ(ex.output_of(again, 0)->session, first.session);
}

TEST(FixtureServer, UnknownPathIs404) {
    Fixture f(FixtureMode::Patched);
    EXPECT_EQ(f.last({f.get("/nowhere")}).status, 404);
}

TEST(FixtureCampaign, CatalogRunsWithoutEvaluationErrors) {
    for (auto mode : {FixtureMode::Patched, FixtureMode::Vulnerable}) {
        FixtureConfig fc;
        fc.mode = mode;
        auto run = mst::testing::run_fixture_campaign(fc);
        EXPECT_EQ(run.result.report.total_errors(), 0u);
        for (const auto& r : run.result.results)
            for (const auto& e : r.errors) ADD_FAILURE() << e.mr << ": " << e.message;
        if (mode == FixtureMode::Patched) EXPECT_EQ(run.result.report.total_kept(), 0u);
        else EXPECT_GT(run.result.report.total_kept(), 0u);
    }
}
