#pragma once

// Metamorphic testing driver: enumerates data views for each relation,
// evaluates it, and keeps the failures that expose new requests.

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "mst/config.h"
#include "mst/executor.h"
#include "mst/provider.h"
#include "mst/smrl/ast.h"
#include "mst/smrl/interpreter.h"
#include "mst/transport.h"

namespace mst {

struct ContextOutput {
    std::string sequence_id;
    std::size_t position = 0;
    bool follow_up = false;
    std::string method;
    std::string url;
    WebOutput output;
};

struct Failure {
    std::string mr;
    /// (kind name, view offset) in iteration order.
    std::vector<std::pair<std::string, std::size_t>> views;
    int expression_index = -1;
    smrl::SourcePos pos;
    std::vector<InputSequence> sources;
    std::vector<InputSequence> follow_ups;
    std::vector<ContextOutput> context;
    /// Requests issued by the violating follow-up inputs (journal slice).
    std::vector<RequestRecord> requests;
};

struct EvalErrorRecord {
    std::string mr;
    std::vector<std::pair<std::string, std::size_t>> views;
    std::string message;
};

struct MrStats {
    std::string mr;
    std::size_t executions = 0;
    std::size_t kept = 0;
    std::size_t suppressed = 0;
    std::size_t errors = 0;
    std::int64_t wall_ms = 0;
    bool budget_exhausted = false;
};

struct MrResult {
    MrStats stats;
    std::vector<Failure> kept;
    std::vector<EvalErrorRecord> errors;
};

struct CampaignReport {
    std::vector<MrStats> mrs;

    std::size_t total_executions() const;
    std::size_t total_kept() const;
    std::size_t total_suppressed() const;
    std::size_t total_errors() const;
};

struct EngineOptions {
    std::int64_t mr_time_budget_ms = 0;  // 0 = unlimited
    std::int64_t max_loop_iterations = 1000000;
    bool reset_before_mr = true;
    /// Observes every evaluation (views already selected).
    std::function<void(const smrl::Verdict&)> on_evaluation;
};

EngineOptions engine_options(const CampaignConfig& cfg);

/// Suppress iff every request of `candidate` already appears among the
/// requests of the kept failures.
bool is_duplicate(const Failure& candidate, const std::vector<Failure>& kept);

/// Evaluates `ast` once per combination of views of its enumerable input
/// kinds (Input first, then User, then the rest alphabetically).
MrResult run_mr(const smrl::RelationAst& ast, DataProvider& provider, Executor& executor, const WebConfig& web,
                const EngineOptions& opts);

struct NamedRelation {
    std::string name;
    smrl::RelationAst ast;
};

using TransportFactory = std::function<std::unique_ptr<Transport>()>;

struct CampaignResult {
    CampaignReport report;
    std::vector<MrResult> results;  // same order as the relations
};

/// Runs the relations on `parallelism` workers. Each worker owns a copy of
/// the provider, a transport and an executor; results keep input order.
CampaignResult run_campaign(const std::vector<NamedRelation>& relations, const DataProvider& provider,
                            const CampaignConfig& cfg, const TransportFactory& transports, int parallelism);

std::string failure_to_json(const Failure& f);
std::string report_to_json(const CampaignReport& r);
CampaignReport report_from_json(const std::string& text);
/// Fixed-width table: MR, executions, failures, suppressed, errors, time.
std::string summary_table(const CampaignReport& r);

/// Writes failures.jsonl, errors.jsonl, report.json and summary.txt.
void write_campaign(const CampaignResult& result, const std::string& dir);

}  // namespace mst
