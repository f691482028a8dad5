#include "support.h"

#include <chrono>

#include "mst/catalog.h"
#include "mst/crawler.h"
#include "mst/smrl/parser.h"
#include "mst/url.h"

namespace mst::testing {

std::string source_dir() { return MST_SOURCE_DIR; }
std::string catalog_dir() { return source_dir() + "/catalog"; }
std::string payload_dir() { return source_dir() + "/payloads"; }

void FakeSite::route(const std::string& method, const std::string& path, Handler h) {
    routes_[method + " " + path] = std::move(h);
}

HttpResponse FakeSite::send(const HttpRequest& req) {
    sent.push_back(req);
    auto it = routes_.find(req.method + " " + parse_url(req.url).path);
    if (it == routes_.end()) return html_response(404, "<html><body>Not found</body></html>");
    return it->second(req);
}

HttpResponse html_response(int status, const std::string& body) {
    HttpResponse r;
    r.status = status;
    r.body = body;
    r.headers.emplace_back("Content-Type", "text/html");
    return r;
}

std::string cookie_of(const HttpRequest& req, const std::string& name) {
    for (const auto& [k, v] : req.headers) {
        if (k != "Cookie") continue;
        if (auto c = Session::parse_cookie_header(v).get(name)) return *c;
    }
    return "";
}

std::string param_of(const HttpRequest& req, const std::string& name) {
    Params all = parse_query(parse_url(req.url).query);
    Params body = parse_query(req.body);
    all.insert(all.end(), body.begin(), body.end());
    for (const auto& [k, v] : all)
        if (k == name) return v;
    return "";
}

std::string filler(const std::string& seed, std::size_t n) {
    std::string out;
    std::uint64_t h = 1469598103934665603ULL;
    for (char c : seed) h = (h ^ static_cast<unsigned char>(c)) * 1099511628211ULL;
    while (out.size() < n) {
        h ^= h << 13;
        h ^= h >> 7;
        h ^= h << 17;
        out += static_cast<char>('a' + h % 26);
    }
    return out;
}

WebOutput output_with_body(std::string body, int status) {
    WebOutput o;
    o.status = status;
    o.body = std::move(body);
    return o;
}

std::size_t evaluation_count(const std::string& source, DataProvider& provider) {
    FakeSite site;
    CampaignConfig cfg;
    Executor exec(cfg.sut, cfg.web, site);
    EngineOptions opts;
    opts.reset_before_mr = false;
    std::size_t n = 0;
    opts.on_evaluation = [&](const smrl::Verdict&) { ++n; };
    run_mr(smrl::parse_relation(source), provider, exec, cfg.web, opts);
    return n;
}

std::vector<bool> evaluation_verdicts(const std::string& source, DataProvider& provider, Transport& transport,
                                      const CampaignConfig& cfg) {
    Executor exec(cfg.sut, cfg.web, transport);
    EngineOptions opts;
    opts.reset_before_mr = false;
    std::vector<bool> out;
    opts.on_evaluation = [&](const smrl::Verdict& v) { out.push_back(v.holds); };
    run_mr(smrl::parse_relation(source), provider, exec, cfg.web, opts);
    return out;
}

std::vector<NamedRelation> catalog_relations(const std::vector<std::string>& names) {
    std::vector<NamedRelation> out;
    for (auto& e : load_catalog(catalog_dir())) {
        if (!names.empty() && std::find(names.begin(), names.end(), e.name) == names.end()) continue;
        out.push_back({e.name, std::move(e.ast)});
    }
    return out;
}

FixtureRun run_fixture_campaign(const FixtureConfig& fc, const std::vector<std::string>& mrs) {
    auto t0 = std::chrono::steady_clock::now();
    FixtureServer server(fc);
    server.start();
    FixtureRun run;
    run.cfg = fixture_campaign(server);
    run.cfg.payload_dir = payload_dir();
    std::vector<User> users = run.cfg.credentials;
    users.push_back(User::anonymous());
    DataProvider provider(run.cfg);
    {
        HttpTransport transport(run.cfg.sut.timeout_ms);
        for (const auto& u : users) {
            run.sessions.push_back(crawl(run.cfg, u, transport, budget_of(run.cfg.crawl)));
            provider.add_session(run.sessions.back());
        }
    }
    int timeout = run.cfg.sut.timeout_ms;
    run.result = run_campaign(
        catalog_relations(mrs), provider, run.cfg,
        [timeout] { return std::make_unique<HttpTransport>(timeout); }, 1);
    server.stop();
    run.wall_ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
    return run;
}

bool failure_hits(const Failure& f, const std::string& path) {
    for (const auto& r : f.requests)
        if (parse_url(r.url).path == path) return true;
    return false;
}

}  // namespace mst::testing
