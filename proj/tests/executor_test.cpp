#include <gtest/gtest.h>

#include "mst/executor.h"
#include "mst/url.h"
#include "support.h"

using namespace mst;
using mst::testing::cookie_of;
using mst::testing::FakeSite;
using mst::testing::html_response;
using mst::testing::param_of;

namespace {

std::string header_of(const HttpRequest& req, const std::string& name) {
    for (const auto& [k, v] : req.headers)
        if (k == name) return v;
    return "";
}

struct Site {
    FakeSite site;
    CampaignConfig cfg;
    int resets = 0;

    Site() {
        cfg.sut.secure_base = "http://secure.test:8443";
        cfg.sut.insecure_base = "http://plain.test:8080";
        site.route("POST", "/login", [](const HttpRequest& r) {
            HttpResponse res = html_response(302, "");
            res.headers.emplace_back("Set-Cookie", "sid=" + param_of(r, "user") + "; Path=/; HttpOnly");
            res.headers.emplace_back("Location", "/home");
            return res;
        });
        site.route("GET", "/home", [](const HttpRequest& r) {
            return html_response(200, "<p>home of " + cookie_of(r, "sid") + "</p>");
        });
        site.route("GET", "/logout", [](const HttpRequest&) {
            HttpResponse res = html_response(200, "bye");
            res.headers.emplace_back("Set-Cookie", "sid=; Max-Age=0");
            return res;
        });
        site.route("GET", "/xss", [](const HttpRequest&) {
            return html_response(200, "<SCRIPT>alert('XSS');</SCRIPT>");
        });
        site.route("GET", "/loop", [](const HttpRequest&) {
            HttpResponse res = html_response(302, "");
            res.headers.emplace_back("Location", "/loop");
            return res;
        });
        site.route("POST", "/__test__/reset", [this](const HttpRequest&) {
            ++resets;
            return html_response(200, "ok");
        });
    }
};

Action login(const std::string& user) {
    Action a = Action::web("POST", "http://anything/login");
    a.form_inputs = {{"user", user}, {"pass", "pw"}};
    return a;
}

Action get(const std::string& path) { return Action::web("GET", "http://anything" + path); }

}  // namespace

TEST(Executor, FollowsRedirectsAndCarriesCookies) {
    Site s;
    Executor ex(s.cfg.sut, s.cfg.web, s.site);
    InputSequence seq = make_sequence({login("devel"), get("/home")}, Origin::Crawler);
    auto out = ex.output_of(seq, 0);
    EXPECT_EQ(out->status, 200);
    EXPECT_EQ(out->body, "<p>home of devel</p>");
    EXPECT_EQ(out->session.get("sid"), "devel");
    ASSERT_EQ(out->request_log.size(), 2u);
    EXPECT_EQ(out->request_log[1], (RequestRecord{"GET", "http://secure.test:8443/home"}));
    EXPECT_EQ(ex.output_of(seq, 1)->body, "<p>home of devel</p>");
    EXPECT_EQ(cookie_of(s.site.sent.back(), "sid"), "devel");
}

TEST(Executor, CachesPrefixOutputs) {
    Site s;
    Executor ex(s.cfg.sut, s.cfg.web, s.site);
    InputSequence seq = make_sequence({login("devel"), get("/home"), get("/home")}, Origin::Crawler);
    ex.output_of(seq, 2);
    std::size_t sent = s.site.sent.size();
    ex.output_of(seq, 0);
    ex.output_of(seq, 1);
    ex.output_of(seq, 2);
    EXPECT_EQ(s.site.sent.size(), sent);
    EXPECT_EQ(ex.requests_for(seq.id).size(), sent);
    EXPECT_THROW(ex.output_of(seq, 3), PositionError);
}

TEST(Executor, ChangedPrefixIsReExecuted) {
    Site s;
    Executor ex(s.cfg.sut, s.cfg.web, s.site);
    InputSequence seq = make_sequence({login("devel"), get("/home")}, Origin::Derived);
    ex.output_of(seq, 1);
    seq.actions[0].form_inputs[0].second = "tester";
    EXPECT_EQ(ex.output_of(seq, 1)->body, "<p>home of tester</p>");
}

TEST(Executor, SequencesStartWithEmptyJar) {
    Site s;
    Executor ex(s.cfg.sut, s.cfg.web, s.site);
    ex.output_of(make_sequence({login("devel")}, Origin::Crawler), 0);
    auto out = ex.output_of(make_sequence({get("/home")}, Origin::Crawler), 0);
    EXPECT_EQ(out->body, "<p>home of </p>");
}

TEST(Executor, SessionOverrideWinsAndMaxAgeDeletes) {
    Site s;
    Executor ex(s.cfg.sut, s.cfg.web, s.site);
    Action home = get("/home");
    home.session_override = Session(std::vector<Session::Cookie>{{"sid", "forged"}});
    InputSequence seq = make_sequence({login("devel"), home, get("/logout")}, Origin::Derived);
    EXPECT_EQ(ex.output_of(seq, 1)->body, "<p>home of forged</p>");
    EXPECT_FALSE(ex.output_of(seq, 2)->session.get("sid").has_value());
}

TEST(Executor, ClockOffsetHeader) {
    Site s;
    Executor ex(s.cfg.sut, s.cfg.web, s.site);
    InputSequence seq = make_sequence({get("/home"), Action::wait(1000), Action::wait(500), get("/home")},
                                      Origin::Script);
    ex.output_of(seq, 3);
    ASSERT_EQ(s.site.sent.size(), 2u);
    EXPECT_EQ(header_of(s.site.sent[0], kClockOffsetHeader), "");
    EXPECT_EQ(header_of(s.site.sent[1], kClockOffsetHeader), "1500");
}

TEST(Executor, ChannelSelectsBase) {
    Site s;
    Executor ex(s.cfg.sut, s.cfg.web, s.site);
    Action a = get("/home");
    a.channel = Channel::Http;
    ex.output_of(make_sequence({a, get("/home")}, Origin::Derived), 1);
    EXPECT_EQ(parse_url(s.site.sent[0].url).host, "plain.test");
    EXPECT_EQ(parse_url(s.site.sent[1].url).host, "secure.test");
}

TEST(Executor, ParametersAndFormEncoding) {
    Site s;
    Executor ex(s.cfg.sut, s.cfg.web, s.site);
    Action a = get("/home");
    a.parameters = {{"q", "a b"}};
    ex.output_of(make_sequence({a, login("x y")}, Origin::Derived), 1);
    EXPECT_EQ(parse_url(s.site.sent[0].url).query, "q=a%20b");
    EXPECT_TRUE(s.site.sent[0].body.empty());
    EXPECT_EQ(s.site.sent[1].content_type, "application/x-www-form-urlencoded");
    EXPECT_EQ(param_of(s.site.sent[1], "user"), "x y");
}

TEST(Executor, NetworkFailureIsStatusZero) {
    Site s;
    Executor ex(s.cfg.sut, s.cfg.web, s.site);
    struct Dead : Transport {
        HttpResponse send(const HttpRequest&) override { return {}; }
    } dead;
    Executor broken(s.cfg.sut, s.cfg.web, dead);
    auto out = broken.output_of(make_sequence({get("/home")}, Origin::Crawler), 0);
    EXPECT_EQ(out->status, 0);
    EXPECT_TRUE(out->body.empty());
}

TEST(Executor, RedirectLoopStops) {
    Site s;
    Executor ex(s.cfg.sut, s.cfg.web, s.site);
    auto out = ex.output_of(make_sequence({get("/loop")}, Origin::Crawler), 0);
    EXPECT_EQ(out->status, 302);
    EXPECT_EQ(out->request_log.size(), 6u);
}

TEST(Executor, ResetActionAndEndpoint) {
    Site s;
    Executor ex(s.cfg.sut, s.cfg.web, s.site);
    EXPECT_TRUE(ex.reset_sut("r"));
    InputSequence seq = make_sequence({login("devel"), Action::reset_sut(), get("/home")}, Origin::Script);
    EXPECT_EQ(ex.output_of(seq, 2)->body, "<p>home of </p>");
    EXPECT_EQ(s.resets, 2);
    EXPECT_EQ(ex.journal().front().sequence_id, "r");

    SutConfig none = s.cfg.sut;
    none.reset_endpoint.clear();
    Executor without(none, s.cfg.web, s.site);
    EXPECT_FALSE(without.reset_sut());
}

TEST(Executor, AlertFlagOnlyWithDialogsOpen) {
    Site s;
    Executor ex(s.cfg.sut, s.cfg.web, s.site);
    InputSequence seq = make_sequence({get("/xss")}, Origin::Crawler);
    EXPECT_FALSE(ex.output_of(seq, 0)->has_alert);
    ex.clear_cache();
    ex.set_keep_dialogs_open(true);
    EXPECT_TRUE(ex.output_of(seq, 0)->has_alert);
}
