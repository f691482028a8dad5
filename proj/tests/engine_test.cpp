#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <thread>

#include "mst/engine.h"
#include "mst/smrl/parser.h"
#include "support.h"

using namespace mst;
using mst::testing::FakeSite;
using mst::testing::html_response;

namespace {

User named(const std::string& n) { return User{n, n + "-pw", "role", n}; }

InputSequence sequence_of(const User& u, const std::vector<std::string>& paths) {
    std::vector<Action> acts;
    for (const auto& p : paths) {
        Action a = Action::web("GET", "http://sut.test" + p);
        a.user = u;
        acts.push_back(a);
    }
    return make_sequence(acts, Origin::Crawler);
}

Failure failure_with(const std::vector<std::string>& urls) {
    Failure f;
    for (const auto& u : urls) f.requests.push_back({"GET", u});
    return f;
}

void add_routes(FakeSite& site) {
    for (const char* p : {"/a", "/b", "/c", "/d"})
        site.route("GET", p, [p](const HttpRequest&) { return html_response(200, std::string("<p>") + p + "</p>"); });
}

// Fails at the first action of Input(1) that is not an error page.
const char* kEveryAction = "MR EveryAction {{ for (Action action : Input(1).actions()) { var pos = action.getPosition(); "
                           "IMPLIES(TRUE, isError(Output(Input(1), pos))); } }}";

}  // namespace

TEST(IsDuplicate, Examples) {
    std::vector<Failure> kept = {failure_with({"/a", "/b"})};
    EXPECT_TRUE(is_duplicate(failure_with({"/a", "/b"}), kept));
    EXPECT_TRUE(is_duplicate(failure_with({"/b"}), kept));
    EXPECT_FALSE(is_duplicate(failure_with({"/a", "/c"}), kept));
    EXPECT_FALSE(is_duplicate(failure_with({"/x"}), kept));
    EXPECT_FALSE(is_duplicate(failure_with({"/a"}), {}));
}

TEST(RunMr, ProductLaw) {
    DataProvider p;
    p.add_input(sequence_of(named("u1"), {"/a"}));
    p.add_input(sequence_of(named("u2"), {"/b"}));
    EXPECT_EQ(mst::testing::evaluation_count("MR P {{ IMPLIES(TRUE, User() != null && Input(1) != null); }}", p), 4u);
    p.add_input(sequence_of(named("u1"), {"/c"}));
    EXPECT_EQ(mst::testing::evaluation_count("MR Q {{ IMPLIES(TRUE, Input(1) != null); }}", p), 3u);
    p.set_random_budget(7);
    EXPECT_EQ(mst::testing::evaluation_count("MR R {{ IMPLIES(TRUE, RandomValue(String) != null && User() != null); }}", p),
              14u);
    EXPECT_EQ(mst::testing::evaluation_count("MR S {{ IMPLIES(TRUE, TRUE); }}", p), 1u);
}

TEST(RunMr, DedupWithinOneMr) {
    FakeSite site;
    add_routes(site);
    CampaignConfig cfg;
    cfg.web.error_pattern = "(?i)<p>";
    DataProvider p;
    p.add_input(sequence_of(named("u"), {"/a", "/b"}));
    p.add_input(sequence_of(named("u"), {"/a", "/b"}));
    p.add_input(sequence_of(named("u"), {"/c"}));
    Executor exec(cfg.sut, cfg.web, site);
    EngineOptions opts;
    opts.reset_before_mr = false;
    std::size_t violations = 0;
    opts.on_evaluation = [&](const smrl::Verdict& v) { violations += !v.holds; };
    // Every output counts as an error page, so the MR holds everywhere.
    MrResult holds = run_mr(smrl::parse_relation(kEveryAction), p, exec, cfg.web, opts);
    EXPECT_EQ(holds.stats.executions, 3u);
    EXPECT_TRUE(holds.kept.empty());
    EXPECT_EQ(violations, 0u);

    cfg.web.error_pattern = "(?i)denied";
    MrResult r = run_mr(smrl::parse_relation(kEveryAction), p, exec, cfg.web, opts);
    EXPECT_EQ(violations, 3u);
    EXPECT_EQ(r.stats.kept + r.stats.suppressed, violations);
    ASSERT_EQ(r.kept.size(), 2u);
    EXPECT_EQ(r.stats.suppressed, 1u);
    std::set<RequestRecord> journal;
    for (const auto& j : exec.journal()) journal.insert({j.method, j.url});
    for (const auto& f : r.kept) {
        EXPECT_FALSE(f.context.empty());
        EXPECT_EQ(f.mr, "EveryAction");
        ASSERT_EQ(f.views.size(), 1u);
        EXPECT_EQ(f.views[0].first, "Input");
        for (const auto& q : f.requests) EXPECT_TRUE(journal.count(q)) << q.url;
    }
}

TEST(RunMr, EvalErrorsAreNotViolations) {
    DataProvider p;
    p.add_input(sequence_of(named("u"), {"/a"}));
    p.add_input(sequence_of(named("u"), {"/a", "/b"}));
    FakeSite site;
    add_routes(site);
    CampaignConfig cfg;
    Executor exec(cfg.sut, cfg.web, site);
    EngineOptions opts;
    opts.reset_before_mr = false;
    MrResult r = run_mr(smrl::parse_relation("MR E {{ IMPLIES(TRUE, Input(1).actions().get(1) != null); }}"), p, exec,
                        cfg.web, opts);
    EXPECT_EQ(r.stats.executions, 2u);
    EXPECT_EQ(r.stats.errors, 1u);
    EXPECT_TRUE(r.kept.empty());
    ASSERT_EQ(r.errors.size(), 1u);
    EXPECT_EQ(r.errors[0].mr, "E");
    EXPECT_FALSE(r.errors[0].message.empty());
}

TEST(RunMr, TimeBudgetStopsRun) {
    FakeSite site;
    site.route("GET", "/slow", [](const HttpRequest&) {
        std::this_thread::sleep_for(std::chrono::milliseconds(3));
        return html_response(200, "slow");
    });
    CampaignConfig cfg;
    DataProvider p;
    p.add_input(sequence_of(named("u"), {"/slow"}));
    p.set_random_budget(100);
    Executor exec(cfg.sut, cfg.web, site);
    EngineOptions opts;
    opts.reset_before_mr = false;
    opts.mr_time_budget_ms = 30;
    MrResult r = run_mr(smrl::parse_relation("MR B {{ IMPLIES(RandomValue(Int) != null, "
                                             "!isError(Output(changeCredentials(Input(1), User()), 0))); }}"),
                        p, exec, cfg.web, opts);
    EXPECT_TRUE(r.stats.budget_exhausted);
    EXPECT_LT(r.stats.executions, 100u);
}

TEST(RunMr, ResetsSutOncePerMr) {
    FakeSite site;
    int resets = 0;
    site.route("POST", "/__test__/reset", [&](const HttpRequest&) {
        ++resets;
        return html_response(200, "ok");
    });
    CampaignConfig cfg;
    DataProvider p;
    p.add_input(sequence_of(named("u"), {"/a"}));
    p.add_input(sequence_of(named("u"), {"/b"}));
    Executor exec(cfg.sut, cfg.web, site);
    run_mr(smrl::parse_relation("MR Z {{ IMPLIES(TRUE, Input(1) != null); }}"), p, exec, cfg.web, engine_options(cfg));
    EXPECT_EQ(resets, 1);
}

TEST(RunCampaign, EmptyListAndParallelDeterminism) {
    CampaignConfig cfg;
    cfg.sut.reset_endpoint.clear();
    cfg.sut.reset_before_mr = false;
    cfg.web.error_pattern = "(?i)denied";
    DataProvider p;
    p.add_input(sequence_of(named("u1"), {"/a", "/b"}));
    p.add_input(sequence_of(named("u2"), {"/c", "/d"}));
    p.add_input(sequence_of(named("u1"), {"/a"}));
    auto factory = [] {
        auto site = std::make_unique<FakeSite>();
        add_routes(*site);
        return site;
    };
    EXPECT_TRUE(run_campaign({}, p, cfg, factory, 2).report.mrs.empty());

    std::vector<NamedRelation> mrs;
    for (int i = 0; i < 6; ++i) {
        auto ast = smrl::parse_relation(kEveryAction);
        ast.name = "M" + std::to_string(i);
        mrs.push_back({ast.name, ast});
    }
    auto key = [](const CampaignResult& c) {
        std::set<std::pair<std::string, std::vector<RequestRecord>>> out;
        for (const auto& r : c.results)
            for (const auto& f : r.kept) out.insert({f.mr, f.requests});
        return out;
    };
    CampaignResult one = run_campaign(mrs, p, cfg, factory, 1);
    CampaignResult four = run_campaign(mrs, p, cfg, factory, 4);
    EXPECT_EQ(key(one), key(four));
    ASSERT_EQ(four.results.size(), 6u);
    for (std::size_t i = 0; i < 6; ++i) EXPECT_EQ(four.results[i].stats.mr, "M" + std::to_string(i));
    EXPECT_EQ(one.report.total_kept(), 6u * 2u);
    EXPECT_EQ(one.report.total_suppressed(), 6u);
}

TEST(Report, JsonRoundTripAndSummary) {
    CampaignReport r;
    r.mrs.push_back({"A", 3, 1, 2, 0, 15, false});
    r.mrs.push_back({"B", 10, 0, 0, 4, 7, true});
    CampaignReport back = report_from_json(report_to_json(r));
    ASSERT_EQ(back.mrs.size(), 2u);
    EXPECT_EQ(back.mrs[1].mr, "B");
    EXPECT_EQ(back.mrs[1].errors, 4u);
    EXPECT_TRUE(back.mrs[1].budget_exhausted);
    EXPECT_EQ(back.total_executions(), 13u);
    EXPECT_EQ(back.total_suppressed(), 2u);
    std::string table = summary_table(r);
    EXPECT_NE(table.find("executions"), std::string::npos);
    EXPECT_NE(table.find("B*"), std::string::npos);
    EXPECT_NE(table.find("total"), std::string::npos);
}

TEST(Report, WriteCampaignFiles) {
    CampaignResult res;
    MrResult m;
    m.stats = {"A", 1, 1, 0, 1, 1, false};
    Failure f = failure_with({"http://sut.test/a"});
    f.mr = "A";
    ContextOutput c;
    c.sequence_id = "s";
    c.url = "http://sut.test/a";
    c.output.status = 200;
    f.context.push_back(c);
    m.kept.push_back(f);
    m.errors.push_back({"A", {{"Input", 0}}, "boom"});
    res.results.push_back(m);
    res.report.mrs.push_back(m.stats);
    auto dir = std::filesystem::temp_directory_path() / "mst_engine_write";
    std::filesystem::remove_all(dir);
    write_campaign(res, dir.string());
    for (const char* name : {"failures.jsonl", "errors.jsonl", "report.json", "summary.txt"})
        EXPECT_TRUE(std::filesystem::exists(dir / name)) << name;
    std::ifstream in(dir / "failures.jsonl");
    std::string line;
    std::getline(in, line);
    EXPECT_NE(line.find("\"mr\":\"A\""), std::string::npos);
    std::filesystem::remove_all(dir);
}
