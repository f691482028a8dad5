#include "mst/engine.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "mst/crawl_session.h"
#include "mst/smrl/analysis.h"

namespace mst {

using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

std::size_t CampaignReport::total_executions() const {
    std::size_t n = 0;
    for (const auto& m : mrs) n += m.executions;
    return n;
}
std::size_t CampaignReport::total_kept() const {
    std::size_t n = 0;
    for (const auto& m : mrs) n += m.kept;
    return n;
}
std::size_t CampaignReport::total_suppressed() const {
    std::size_t n = 0;
    for (const auto& m : mrs) n += m.suppressed;
    return n;
}
std::size_t CampaignReport::total_errors() const {
    std::size_t n = 0;
    for (const auto& m : mrs) n += m.errors;
    return n;
}

EngineOptions engine_options(const CampaignConfig& cfg) {
    EngineOptions o;
    o.mr_time_budget_ms = cfg.mr_time_budget_ms;
    o.max_loop_iterations = cfg.max_loop_iterations;
    o.reset_before_mr = cfg.sut.reset_before_mr;
    return o;
}

bool is_duplicate(const Failure& candidate, const std::vector<Failure>& kept) {
    std::set<RequestRecord> seen;
    for (const auto& f : kept) seen.insert(f.requests.begin(), f.requests.end());
    return std::all_of(candidate.requests.begin(), candidate.requests.end(),
                       [&](const RequestRecord& r) { return seen.count(r) > 0; });
}

namespace {

std::int64_t ms_since(Clock::time_point t) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - t).count();
}

class MrRunner {
public:
    MrRunner(const smrl::RelationAst& ast, DataProvider& provider, Executor& executor, const WebConfig& web,
             const EngineOptions& opts)
        : ast_(ast), provider_(provider), executor_(executor), web_(web), opts_(opts) {}

    MrResult run() {
        start_ = Clock::now();
        result_.stats.mr = ast_.name;
        std::set<smrl::DataKind> referenced;
        for (auto k : smrl::extract_source_input_types(ast_))
            if (smrl::is_enumerable(k)) referenced.insert(k);
        kinds_ = smrl::canonical_order(referenced);

        provider_.reset_views();
        executor_.clear_cache();
        auto flag = ast_.flags.find("keepDialogsOpen");
        executor_.set_keep_dialogs_open(flag != ast_.flags.end() && flag->second);
        if (opts_.reset_before_mr) executor_.reset_sut("reset:" + ast_.name);

        iterate(0);
        result_.stats.kept = result_.kept.size();
        result_.stats.errors = result_.errors.size();
        result_.stats.wall_ms = ms_since(start_);
        return std::move(result_);
    }

private:
    const smrl::RelationAst& ast_;
    DataProvider& provider_;
    Executor& executor_;
    const WebConfig& web_;
    const EngineOptions& opts_;
    std::vector<smrl::DataKind> kinds_;
    NotTriedStore tried_;
    Clock::time_point start_;
    MrResult result_;
    bool stopped_ = false;

    bool over_budget() const { return opts_.mr_time_budget_ms > 0 && ms_since(start_) >= opts_.mr_time_budget_ms; }

    void iterate(std::size_t depth) {
        if (stopped_) return;
        if (depth == kinds_.size()) {
            evaluate();
            return;
        }
        auto kind = kinds_[depth];
        while (provider_.has_more_views(kind)) {
            provider_.next_view(kind);
            iterate(depth + 1);
            if (stopped_) return;
        }
    }

    std::vector<std::pair<std::string, std::size_t>> current_views() const {
        std::vector<std::pair<std::string, std::size_t>> v;
        for (auto k : kinds_) v.emplace_back(smrl::function_name(k), provider_.offset(k));
        return v;
    }

    void evaluate() {
        if (over_budget()) {
            stopped_ = true;
            result_.stats.budget_exhausted = true;
            return;
        }
        ++result_.stats.executions;
        smrl::EvalEnv env{provider_, executor_, web_, tried_, opts_.max_loop_iterations, {}, {}};
        if (opts_.mr_time_budget_ms > 0) env.should_stop = [this] { return over_budget(); };
        smrl::Verdict verdict;
        try {
            verdict = smrl::evaluate_relation(ast_, env);
        } catch (const std::exception& e) {
            result_.errors.push_back({ast_.name, current_views(), e.what()});
            if (over_budget()) {
                stopped_ = true;
                result_.stats.budget_exhausted = true;
            }
            return;
        }
        if (opts_.on_evaluation) opts_.on_evaluation(verdict);
        if (verdict.holds || !verdict.violation) return;
        Failure f = make_failure(*verdict.violation);
        if (is_duplicate(f, result_.kept))
            ++result_.stats.suppressed;
        else
            result_.kept.push_back(std::move(f));
    }

    Failure make_failure(const smrl::Violation& v) const {
        Failure f;
        f.mr = ast_.name;
        f.views = current_views();
        f.expression_index = v.expression_index;
        f.pos = v.pos;
        for (const auto& s : v.sources) f.sources.push_back(*s);
        for (const auto& s : v.follow_ups) f.follow_ups.push_back(*s);

        std::vector<std::string> follow_ids;
        auto note = [&](const std::string& id) {
            if (std::find(follow_ids.begin(), follow_ids.end(), id) == follow_ids.end()) follow_ids.push_back(id);
        };
        for (const auto& s : v.follow_ups) note(s->id);
        for (const auto& c : v.context) {
            ContextOutput co;
            co.sequence_id = c.seq->id;
            co.position = c.position;
            co.follow_up = c.follow_up;
            if (c.position < c.seq->actions.size()) {
                const Action& a = c.seq->actions[c.position];
                co.method = a.method;
                co.url = full_url(a);
            }
            co.output = *c.output;
            f.context.push_back(std::move(co));
            if (c.follow_up) note(c.seq->id);
        }
        if (follow_ids.empty())
            for (const auto& s : v.sources) note(s->id);

        std::set<RequestRecord> seen;
        for (const auto& id : follow_ids)
            for (auto& r : executor_.requests_for(id))
                if (seen.insert(r).second) f.requests.push_back(r);
        return f;
    }
};

json views_json(const std::vector<std::pair<std::string, std::size_t>>& views) {
    json j = json::object();
    for (const auto& [k, off] : views) j[k] = off;
    return j;
}

json output_json(const WebOutput& o) {
    json log = json::array();
    for (const auto& r : o.request_log) log.push_back({r.method, r.url});
    json cookies = json::array();
    for (const auto& [k, v] : o.session.cookies()) cookies.push_back({k, v});
    return {{"status", o.status}, {"body", o.body}, {"session", cookies}, {"has_alert", o.has_alert},
            {"requests", log}};
}

json stats_json(const MrStats& s) {
    return {{"mr", s.mr},         {"executions", s.executions}, {"kept", s.kept},
            {"suppressed", s.suppressed}, {"errors", s.errors}, {"wall_ms", s.wall_ms},
            {"budget_exhausted", s.budget_exhausted}};
}

}  // namespace

MrResult run_mr(const smrl::RelationAst& ast, DataProvider& provider, Executor& executor, const WebConfig& web,
                const EngineOptions& opts) {
    return MrRunner(ast, provider, executor, web, opts).run();
}

CampaignResult run_campaign(const std::vector<NamedRelation>& relations, const DataProvider& provider,
                            const CampaignConfig& cfg, const TransportFactory& transports, int parallelism) {
    CampaignResult out;
    out.results.resize(relations.size());
    EngineOptions opts = engine_options(cfg);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        DataProvider local = provider;
        auto transport = transports();
        Executor executor(cfg.sut, cfg.web, *transport);
        for (std::size_t i = next++; i < relations.size(); i = next++)
            out.results[i] = run_mr(relations[i].ast, local, executor, cfg.web, opts);
    };
    std::size_t n = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(parallelism, 1)), 1,
                                            std::max<std::size_t>(relations.size(), 1));
    if (n == 1) {
        if (!relations.empty()) worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < n; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    for (const auto& r : out.results) out.report.mrs.push_back(r.stats);
    return out;
}

std::string failure_to_json(const Failure& f) {
    json sources = json::array();
    for (const auto& s : f.sources) sources.push_back(json::parse(sequence_to_json(s)));
    json follow = json::array();
    for (const auto& s : f.follow_ups) follow.push_back(json::parse(sequence_to_json(s)));
    json context = json::array();
    for (const auto& c : f.context)
        context.push_back({{"sequence", c.sequence_id},
                           {"position", c.position},
                           {"follow_up", c.follow_up},
                           {"method", c.method},
                           {"url", c.url},
                           {"output", output_json(c.output)}});
    json requests = json::array();
    for (const auto& r : f.requests) requests.push_back({r.method, r.url});
    json j = {{"mr", f.mr},
              {"views", views_json(f.views)},
              {"expression", f.expression_index},
              {"line", f.pos.line},
              {"column", f.pos.column},
              {"requests", requests},
              {"context", context},
              {"sources", sources},
              {"follow_ups", follow}};
    return j.dump();
}

std::string report_to_json(const CampaignReport& r) {
    json mrs = json::array();
    for (const auto& m : r.mrs) mrs.push_back(stats_json(m));
    json j = {{"mrs", mrs},
              {"totals",
               {{"executions", r.total_executions()},
                {"kept", r.total_kept()},
                {"suppressed", r.total_suppressed()},
                {"errors", r.total_errors()}}}};
    return j.dump(2);
}

CampaignReport report_from_json(const std::string& text) {
    CampaignReport r;
    json j = json::parse(text);
    for (const auto& m : j.at("mrs")) {
        MrStats s;
        s.mr = m.at("mr").get<std::string>();
        s.executions = m.value("executions", std::size_t{0});
        s.kept = m.value("kept", std::size_t{0});
        s.suppressed = m.value("suppressed", std::size_t{0});
        s.errors = m.value("errors", std::size_t{0});
        s.wall_ms = m.value("wall_ms", std::int64_t{0});
        s.budget_exhausted = m.value("budget_exhausted", false);
        r.mrs.push_back(std::move(s));
    }
    return r;
}

std::string summary_table(const CampaignReport& r) {
    std::size_t w = 28;
    for (const auto& m : r.mrs) w = std::max(w, m.mr.size() + 2);
    std::ostringstream os;
    auto row = [&](const std::string& name, const std::string& ex, const std::string& f, const std::string& s,
                   const std::string& e, const std::string& t) {
        os << std::left << std::setw(static_cast<int>(w)) << name << std::right << std::setw(11) << ex
           << std::setw(10) << f << std::setw(12) << s << std::setw(8) << e << std::setw(10) << t << '\n';
    };
    row("MR", "executions", "failures", "suppressed", "errors", "time_ms");
    for (const auto& m : r.mrs)
        row(m.mr + (m.budget_exhausted ? "*" : ""), std::to_string(m.executions), std::to_string(m.kept),
            std::to_string(m.suppressed), std::to_string(m.errors), std::to_string(m.wall_ms));
    std::int64_t total_ms = 0;
    for (const auto& m : r.mrs) total_ms += m.wall_ms;
    row("total", std::to_string(r.total_executions()), std::to_string(r.total_kept()),
        std::to_string(r.total_suppressed()), std::to_string(r.total_errors()), std::to_string(total_ms));
    return os.str();
}

void write_campaign(const CampaignResult& result, const std::string& dir) {
    std::filesystem::create_directories(dir);
    std::filesystem::path d(dir);
    std::ofstream failures(d / "failures.jsonl");
    std::ofstream errors(d / "errors.jsonl");
    for (const auto& r : result.results) {
        for (const auto& f : r.kept) failures << failure_to_json(f) << '\n';
        for (const auto& e : r.errors)
            errors << json{{"mr", e.mr}, {"views", views_json(e.views)}, {"message", e.message}}.dump() << '\n';
    }
    std::ofstream(d / "report.json") << report_to_json(result.report) << '\n';
    std::ofstream(d / "summary.txt") << summary_table(result.report);
}

}  // namespace mst
