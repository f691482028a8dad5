#include <gtest/gtest.h>

#include <filesystem>
#include <set>

#include "mst/crawler.h"
#include "mst/text_distance.h"
#include "mst/url.h"
#include "support.h"

using namespace mst;

namespace {

class DeadTransport : public Transport {
public:
    HttpResponse send(const HttpRequest&) override {
        HttpResponse r;
        r.error = "connection refused";
        return r;
    }
};

std::set<std::string> action_paths(const CrawlSession& s) {
    std::set<std::string> out;
    for (const auto& e : s.edges)
        if (e.action.is_web()) out.insert(parse_url(e.action.url).path);
    return out;
}

CrawlEdge edge(int id, int from, int to, const std::string& path) {
    CrawlEdge e;
    e.id = id;
    e.from = from;
    e.to = to;
    e.action = Action::web("GET", "http://sut.test" + path);
    e.output.status = 200;
    e.output.body = path;
    return e;
}

class FixtureCrawl : public ::testing::Test {
protected:
    void SetUp() override {
        FixtureConfig fc;
        fc.mode = FixtureMode::Vulnerable;
        server_ = std::make_unique<FixtureServer>(fc);
        server_->start();
        cfg_ = fixture_campaign(*server_);
        transport_ = std::make_unique<HttpTransport>(cfg_.sut.timeout_ms);
    }
    void TearDown() override {
        transport_.reset();
        server_->stop();
    }

    CrawlSession crawl_as(const User& u, CrawlBudget b = {60, 60000}) { return crawl(cfg_, u, *transport_, b); }

    std::unique_ptr<FixtureServer> server_;
    std::unique_ptr<HttpTransport> transport_;
    CampaignConfig cfg_;
};

}  // namespace

TEST(ClassifyState, DistanceArithmetic) {
    CrawlSession s;
    std::string page = mst::testing::filler("page", 1000);
    EXPECT_EQ(classify_state(s, "/p", page, 0.05), 0);
    EXPECT_EQ(classify_state(s, "/p", page, 0.05), 0);
    std::string near = page;
    near[500] = near[500] == 'z' ? 'y' : 'z';
    EXPECT_EQ(classify_state(s, "/q", near, 0.05), 0);
    std::string far = page;
    for (std::size_t i = 0; i < 200; ++i) far[i * 5] = '#';
    EXPECT_EQ(classify_state(s, "/r", far, 0.05), 1);
    EXPECT_EQ(s.states.size(), 2u);
}

TEST(DerivePaths, TreeWithTwoLeaves) {
    CrawlSession s;
    s.states = {{0, "/", ""}, {1, "/a", ""}, {2, "/b", ""}, {3, "/c", ""}};
    s.edges = {edge(0, -1, 0, "/"), edge(1, 0, 1, "/a"), edge(2, 0, 2, "/b"), edge(3, 1, 3, "/c")};
    EXPECT_EQ(derive_paths(s), (std::vector<std::vector<int>>{{0, 1, 3}, {0, 2}}));
    auto seqs = derive_source_inputs(s);
    ASSERT_EQ(seqs.size(), 2u);
    EXPECT_EQ(seqs[0].size(), 3u);
    EXPECT_EQ(seqs[0].origin, Origin::Crawler);
}

TEST(DerivePaths, SingleStateYieldsNothing) {
    CrawlSession s;
    s.states = {{0, "/", ""}};
    s.edges = {edge(0, -1, 0, "/")};
    EXPECT_TRUE(derive_paths(s).empty());
}

TEST(DerivePaths, CycleEdgesAreCut) {
    CrawlSession s;
    s.states = {{0, "/", ""}, {1, "/a", ""}};
    s.edges = {edge(0, -1, 0, "/"), edge(1, 0, 1, "/a"), edge(2, 1, 0, "/"), edge(3, 1, 1, "/a")};
    EXPECT_EQ(derive_paths(s), (std::vector<std::vector<int>>{{0, 1}}));
}

TEST(DerivePaths, LoginStatsStartSlave) {
    CrawlSession s;
    s.states = {{0, "/home", ""}, {1, "/stats", ""}, {2, "/startSlave", ""}};
    s.edges = {edge(0, -1, 0, "/login"), edge(1, 0, 1, "/stats"), edge(2, 1, 2, "/startSlave")};
    auto seqs = derive_source_inputs(s);
    ASSERT_EQ(seqs.size(), 1u);
    std::vector<std::string> paths;
    for (const auto& a : seqs[0].actions) paths.push_back(parse_url(a.url).path);
    EXPECT_EQ(paths, (std::vector<std::string>{"/login", "/stats", "/startSlave"}));
}

TEST(SessionJson, RoundTripAndErrors) {
    CrawlSession s;
    s.user = User{"devel", "devel-pw-2", "developer", "devel"};
    s.timestamp = "2026-01-01T00:00:00Z";
    s.sut = "http://127.0.0.1:1";
    s.states = {{0, "/", "<p>root</p>"}, {1, "/a", "<p>a</p>"}};
    s.edges = {edge(0, -1, 0, "/"), edge(1, 0, 1, "/a")};
    s.edges[1].action.parameters = {{"q", "x y"}};
    s.edges[1].action.form_inputs = {{"f", "1"}};
    s.edges[1].output.session.set("sid", "S1001x");
    s.gui_urls = {"http://sut.test/", "http://sut.test/a"};
    s.derived_inputs = derive_paths(s);
    s.login_failed = true;
    EXPECT_EQ(session_from_json(session_to_json(s)), s);

    auto path = std::filesystem::temp_directory_path() / "mst_session_roundtrip.json";
    save_session(s, path.string());
    EXPECT_EQ(load_session(path.string()), s);
    std::filesystem::remove(path);

    EXPECT_THROW(session_from_json("{\"user\": 3}", "bad.json"), LoadError);
    try {
        session_from_json("not json", "bad.json");
        FAIL();
    } catch (const LoadError& e) {
        EXPECT_NE(std::string(e.what()).find("bad.json"), std::string::npos);
    }
}

TEST(Crawl, UnreachableSutThrows) {
    DeadTransport dead;
    CampaignConfig cfg;
    EXPECT_THROW(crawl(cfg, User::anonymous(), dead, {10, 1000}), CrawlError);
}

TEST_F(FixtureCrawl, AnonymousSeesOnlyPublicPages) {
    CrawlSession s = crawl_as(User::anonymous());
    auto paths = action_paths(s);
    EXPECT_TRUE(paths.count("/"));
    EXPECT_TRUE(paths.count("/about"));
    EXPECT_FALSE(paths.count("/admin/config"));
    EXPECT_FALSE(paths.count("/profile"));
    EXPECT_FALSE(s.login_failed);
    EXPECT_FALSE(derive_paths(s).empty());
}

TEST_F(FixtureCrawl, AdminReachesConfig) {
    CrawlSession s = crawl_as(fixture_users()[0]);
    EXPECT_EQ(s.user.username, "admin");
    EXPECT_TRUE(action_paths(s).count("/admin/config"));
    CrawlIndex idx;
    idx.add_session(s);
    EXPECT_TRUE(idx.gui_urls.at("admin").count(normalize_url(cfg_.sut.secure_base + "/admin/config")));
}

TEST_F(FixtureCrawl, BudgetOfOneStateKeepsRootOnly) {
    CrawlSession s = crawl_as(fixture_users()[1], {1, 60000});
    EXPECT_EQ(s.states.size(), 1u);
}

TEST_F(FixtureCrawl, FailedLoginContinuesAnonymously) {
    User wrong = fixture_users()[2];
    wrong.password = "not-the-password";
    CrawlSession s = crawl_as(wrong);
    EXPECT_TRUE(s.login_failed);
    EXPECT_FALSE(action_paths(s).count("/home") && action_paths(s).count("/profile"));
}

TEST_F(FixtureCrawl, DeterministicGraph) {
    CrawlSession a = crawl_as(fixture_users()[1]);
    CrawlSession b = crawl_as(fixture_users()[1]);
    EXPECT_EQ(a.states, b.states);
    ASSERT_EQ(a.edges.size(), b.edges.size());
    for (std::size_t i = 0; i < a.edges.size(); ++i) {
        EXPECT_EQ(a.edges[i].from, b.edges[i].from);
        EXPECT_EQ(a.edges[i].to, b.edges[i].to);
        EXPECT_EQ(a.edges[i].action, b.edges[i].action);
    }
    EXPECT_EQ(a.derived_inputs, b.derived_inputs);
}

TEST_F(FixtureCrawl, StatesAreSeparated) {
    CrawlSession s = crawl_as(fixture_users()[0]);
    for (std::size_t i = 0; i < s.states.size(); ++i)
        for (std::size_t j = i + 1; j < s.states.size(); ++j)
            EXPECT_FALSE(within_relative_distance(s.states[i].body, s.states[j].body, cfg_.web.similarity_threshold))
                << s.states[i].url << " vs " << s.states[j].url;
}
