// mst: crawl a SUT, check relation files, run campaigns, print reports and
// host the demo fixture.
//
// Exit codes: 0 no failures, 1 violations found, 2 usage/config error,
// 3 runtime error.

#include <atomic>
#include <chrono>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "mst/catalog.h"
#include "mst/config.h"
#include "mst/crawler.h"
#include "mst/engine.h"
#include "mst/fixture.h"
#include "mst/provider.h"
#include "mst/smrl/analysis.h"
#include "mst/transport.h"

namespace fs = std::filesystem;

namespace {

constexpr int kOk = 0;
constexpr int kViolations = 1;
constexpr int kUsage = 2;
constexpr int kRuntime = 3;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::atomic<bool> g_interrupted{false};

void on_signal(int) { g_interrupted = true; }

std::string session_file_name(const mst::User& u) {
    return (u.is_anonymous() ? std::string("anonymous") : u.username) + ".session.json";
}

std::vector<std::string> session_files(const std::string& dir) {
    if (!fs::is_directory(dir)) throw UsageError("data directory not found: " + dir);
    std::vector<std::string> out;
    for (const auto& e : fs::directory_iterator(dir)) {
        std::string name = e.path().filename().string();
        if (name.size() > 13 && name.ends_with(".session.json")) out.push_back(e.path().string());
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::string> relation_files(const std::vector<std::string>& paths) {
    std::vector<std::string> out;
    for (const auto& p : paths) {
        if (fs::is_directory(p)) {
            std::vector<std::string> found;
            for (const auto& e : fs::directory_iterator(p))
                if (e.path().extension() == ".smrl") found.push_back(e.path().string());
            std::sort(found.begin(), found.end());
            out.insert(out.end(), found.begin(), found.end());
        } else if (fs::exists(p)) {
            out.push_back(p);
        } else {
            throw UsageError("no such file: " + p);
        }
    }
    return out;
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

mst::CampaignConfig config_or_usage(const std::string& path) {
    try {
        mst::CampaignConfig cfg = mst::load_config(path);
        mst::validate(cfg);
        return cfg;
    } catch (const mst::ConfigError& e) {
        throw UsageError(e.what());
    }
}

int cmd_crawl(const std::string& config_path, const std::string& user, bool all_users, const std::string& out_dir) {
    mst::CampaignConfig cfg = config_or_usage(config_path);
    std::vector<mst::User> users;
    if (all_users) {
        users = cfg.credentials;
        if (cfg.crawl.include_anonymous) users.push_back(mst::User::anonymous());
    } else if (user.empty() || user == "anonymous") {
        users.push_back(mst::User::anonymous());
    } else {
        const mst::User* u = mst::find_credential(cfg, user);
        if (!u) throw UsageError("no credentials configured for user '" + user + "'");
        users.push_back(*u);
    }
    fs::create_directories(out_dir);
    mst::HttpTransport transport(cfg.sut.timeout_ms);
    for (const auto& u : users) {
        mst::CrawlSession s = mst::crawl(cfg, u, transport, mst::budget_of(cfg.crawl));
        fs::path file = fs::path(out_dir) / session_file_name(u);
        mst::save_session(s, file.string());
        std::cout << (u.is_anonymous() ? "anonymous" : u.username) << ": " << s.states.size() << " states, "
                  << s.edges.size() << " edges, " << s.derived_inputs.size() << " inputs"
                  << (s.login_failed ? " (login failed)" : "") << " -> " << file.string() << "\n";
    }
    return kOk;
}

int cmd_check(const std::vector<std::string>& paths) {
    int count = 0;
    for (const auto& file : relation_files(paths)) {
        std::vector<mst::CatalogEntry> entries;
        try {
            entries = mst::load_relation_file(file);
        } catch (const mst::CatalogError& e) {
            std::cerr << e.what() << "\n";
            return kUsage;
        }
        for (const auto& e : entries) {
            std::cout << e.name << " [" << e.file << "]\n  inputs:";
            for (auto k : mst::smrl::canonical_order(mst::smrl::extract_source_input_types(e.ast)))
                std::cout << ' ' << mst::smrl::function_name(k);
            std::cout << "\n  pattern: " << e.classification.pattern_id.value_or("none") << " ("
                      << e.classification.vector.to_string() << ")\n";
            ++count;
        }
    }
    std::cout << count << " MRs checked\n";
    return kOk;
}

std::vector<mst::NamedRelation> select_relations(const std::string& catalog_dir, const std::string& mrs) {
    std::vector<mst::CatalogEntry> catalog;
    try {
        catalog = mst::load_catalog(catalog_dir);
    } catch (const mst::CatalogError& e) {
        throw UsageError(e.what());
    }
    std::vector<mst::NamedRelation> out;
    if (mrs == "all") {
        for (auto& e : catalog) out.push_back({e.name, std::move(e.ast)});
        return out;
    }
    for (const auto& name : split_list(mrs)) {
        auto it = std::find_if(catalog.begin(), catalog.end(), [&](const auto& e) { return e.name == name; });
        if (it == catalog.end()) throw UsageError("unknown MR '" + name + "'");
        out.push_back({it->name, it->ast});
    }
    if (out.empty()) throw UsageError("no MRs selected");
    return out;
}

int cmd_run(const std::string& config_path, const std::string& data_dir, const std::string& mrs,
            const std::string& out_dir, const std::string& catalog_dir, int parallelism) {
    mst::CampaignConfig cfg = config_or_usage(config_path);
    auto relations = select_relations(catalog_dir, mrs);
    mst::DataProvider provider = mst::load_collected_data(cfg, session_files(data_dir), cfg.scripts);
    if (provider.inputs().empty()) throw UsageError("no source inputs under " + data_dir);
    int workers = parallelism > 0 ? parallelism : cfg.parallelism;
    int timeout = cfg.sut.timeout_ms;
    auto result = mst::run_campaign(
        relations, provider, cfg, [timeout] { return std::make_unique<mst::HttpTransport>(timeout); }, workers);
    mst::write_campaign(result, out_dir);
    std::cout << mst::summary_table(result.report);
    return result.report.total_kept() > 0 ? kViolations : kOk;
}

int cmd_report(const std::string& in_dir) {
    fs::path file = fs::path(in_dir) / "report.json";
    std::ifstream in(file);
    if (!in) throw UsageError("cannot read " + file.string());
    std::stringstream ss;
    ss << in.rdbuf();
    mst::CampaignReport report;
    try {
        report = mst::report_from_json(ss.str());
    } catch (const std::exception& e) {
        throw UsageError(file.string() + ": " + e.what());
    }
    std::cout << mst::summary_table(report);
    return report.total_kept() > 0 ? kViolations : kOk;
}

int cmd_fixture(const std::string& mode, int port, int insecure_port, const std::string& write_config,
                const std::string& payload_dir) {
    mst::FixtureConfig fc;
    try {
        fc.mode = mst::fixture_mode_from_string(mode);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    fc.port = port;
    fc.insecure_port = insecure_port;
    if (port != 0 && port == insecure_port) throw UsageError("--port and --insecure-port must differ");
    mst::FixtureServer server(fc);
    server.start();
    std::cout << "fixture (" << mode << ") secure " << server.secure_base() << " insecure "
              << server.insecure_base() << std::endl;
    if (!write_config.empty()) {
        mst::CampaignConfig cfg = mst::fixture_campaign(server);
        if (!payload_dir.empty()) cfg.payload_dir = fs::absolute(payload_dir).string();
        mst::save_config(cfg, write_config);
        std::cout << "config written to " << write_config << std::endl;
    }
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    while (!g_interrupted) std::this_thread::sleep_for(std::chrono::milliseconds(100));
    server.stop();
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Metamorphic security testing for web systems"};
    app.require_subcommand(1);

    std::string config, user, out, data, mrs = "all", catalog = "catalog", in, mode = "patched", write_config,
                                         payload_dir;
    bool all_users = false;
    int parallelism = 0, port = 0, insecure_port = 0;
    std::vector<std::string> check_paths;

    auto* crawl = app.add_subcommand("crawl", "Crawl the SUT and save one session per user");
    crawl->add_option("--config", config, "Campaign config file")->required();
    auto* user_opt = crawl->add_option("--user", user, "User to crawl as (anonymous when omitted)");
    crawl->add_flag("--all-users", all_users, "Crawl every configured user")->excludes(user_opt);
    crawl->add_option("--out", out, "Output directory")->required();

    auto* check = app.add_subcommand("check", "Parse and check relation files");
    check->add_option("paths", check_paths, "Files or directories")->required();

    auto* run = app.add_subcommand("run", "Run relations against the SUT");
    run->add_option("--config", config, "Campaign config file")->required();
    run->add_option("--data", data, "Directory of crawl sessions")->required();
    run->add_option("--mrs", mrs, "Comma-separated MR names or 'all'");
    run->add_option("--out", out, "Output directory")->required();
    run->add_option("--catalog", catalog, "Catalog directory");
    run->add_option("--parallelism", parallelism, "Worker count (config value when 0)");

    auto* report = app.add_subcommand("report", "Print the summary of a finished run");
    report->add_option("--in", in, "Run output directory")->required();

    auto* fixture = app.add_subcommand("fixture", "Demo web application");
    fixture->require_subcommand(1);
    auto* serve = fixture->add_subcommand("serve", "Serve until interrupted");
    serve->add_option("--mode", mode, "vulnerable|patched");
    serve->add_option("--port", port, "Secure port (0 = any)");
    serve->add_option("--insecure-port", insecure_port, "Plaintext port (0 = any)");
    serve->add_option("--write-config", write_config, "Write a matching campaign config");
    serve->add_option("--payloads", payload_dir, "Payload directory recorded in the written config");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        if (crawl->parsed()) return cmd_crawl(config, user, all_users, out);
        if (check->parsed()) return cmd_check(check_paths);
        if (run->parsed()) return cmd_run(config, data, mrs, out, catalog, parallelism);
        if (report->parsed()) return cmd_report(in);
        if (serve->parsed()) return cmd_fixture(mode, port, insecure_port, write_config, payload_dir);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRuntime;
    }
    return kUsage;
}
