#pragma once

// Helpers shared by the unit tests and the acceptance runner.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mst/config.h"
#include "mst/crawl_session.h"
#include "mst/engine.h"
#include "mst/fixture.h"
#include "mst/provider.h"
#include "mst/transport.h"

namespace mst::testing {

std::string source_dir();
std::string catalog_dir();
std::string payload_dir();

/// In-memory SUT. Routes match on method and path; the query is ignored.
class FakeSite : public Transport {
public:
    using Handler = std::function<HttpResponse(const HttpRequest&)>;

    void route(const std::string& method, const std::string& path, Handler h);
    HttpResponse send(const HttpRequest& req) override;

    std::vector<HttpRequest> sent;

private:
    std::map<std::string, Handler> routes_;
};

HttpResponse html_response(int status, const std::string& body);
std::string cookie_of(const HttpRequest& req, const std::string& name);
/// Value of a form field or query parameter.
std::string param_of(const HttpRequest& req, const std::string& name);

/// Filler text of `n` characters derived from `seed`, different per seed.
std::string filler(const std::string& seed, std::size_t n);

WebOutput output_with_body(std::string body, int status = 200);

/// Counts evaluations of `source` (one MR) on `provider`.
std::size_t evaluation_count(const std::string& source, DataProvider& provider);
/// Verdict of each evaluation in order.
std::vector<bool> evaluation_verdicts(const std::string& source, DataProvider& provider, Transport& transport,
                                      const CampaignConfig& cfg);

struct FixtureRun {
    CampaignConfig cfg;
    std::vector<CrawlSession> sessions;
    CampaignResult result;
    std::int64_t wall_ms = 0;
};

/// Starts a fixture, crawls it as every configured user and anonymous,
/// then runs the named catalog MRs (all when empty).
FixtureRun run_fixture_campaign(const FixtureConfig& fc, const std::vector<std::string>& mrs = {});

std::vector<NamedRelation> catalog_relations(const std::vector<std::string>& names = {});

/// True when some request of the failure targets `path` (query ignored).
bool failure_hits(const Failure& f, const std::string& path);

}  // namespace mst::testing
