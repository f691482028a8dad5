#include "mst/crawler.h"

#include <chrono>
#include <ctime>
#include <set>

#include "mst/executor.h"
#include "mst/html.h"
#include "mst/script.h"
#include "mst/text_distance.h"
#include "mst/url.h"
#include "mst/web_utils.h"

namespace mst {

int classify_state(CrawlSession& session, const std::string& url, const std::string& body, double threshold) {
    for (const auto& s : session.states)
        if (within_relative_distance(s.body, body, threshold)) return s.id;
    int id = static_cast<int>(session.states.size());
    session.states.push_back({id, url, body});
    return id;
}

namespace {

std::string now_iso8601() {
    std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string strip_query(const std::string& url) {
    auto q = url.find('?');
    return q == std::string::npos ? url : url.substr(0, q);
}

std::string query_of(const std::string& url) {
    auto q = url.find('?');
    return q == std::string::npos ? std::string() : url.substr(q + 1);
}

class Crawler {
public:
    Crawler(const CampaignConfig& cfg, const User& user, Transport& transport, CrawlBudget budget)
        : cfg_(cfg),
          user_(user.username.empty() ? User::anonymous() : user),
          executor_(cfg.sut, cfg.web, transport),
          budget_(budget),
          origin_(url_origin(cfg.sut.secure_base)),
          start_(std::chrono::steady_clock::now()) {}

    CrawlSession run() {
        session_.user = user_;
        session_.timestamp = now_iso8601();
        session_.sut = cfg_.sut.secure_base;
        executor_.reset_sut("crawl");

        Action entry = user_.is_anonymous() ? anonymous_entry() : make_login_action(user_, cfg_);
        if (!user_.is_anonymous()) entry.channel = cfg_.sut.default_channel;
        WebOutput out = run_path({}, entry);
        if (out.status == 0) throw CrawlError("SUT unreachable at " + cfg_.sut.secure_base);
        if (!user_.is_anonymous() && (is_error(out, cfg_.web) || out.session.empty())) {
            session_.login_failed = true;
            acting_ = User::anonymous();
            entry = anonymous_entry();
            out = run_path({}, entry);
            if (out.status == 0) throw CrawlError("SUT unreachable at " + cfg_.sut.secure_base);
        } else {
            acting_ = user_;
        }
        std::string url = landing_url(entry, out);
        int root = classify_state(session_, url, out.body, cfg_.web.similarity_threshold);
        session_.root_state = root;
        session_.edges.push_back({0, -1, root, entry, out});
        note_url(full_url(entry));
        explore(root, {0}, url, out.body);

        session_.derived_inputs = derive_paths(session_);
        session_.budget_spent_ms = elapsed_ms();
        session_.gui_urls.assign(gui_.begin(), gui_.end());
        return std::move(session_);
    }

private:
    const CampaignConfig& cfg_;
    User user_;
    User acting_;
    Executor executor_;
    CrawlBudget budget_;
    std::string origin_;
    std::chrono::steady_clock::time_point start_;
    CrawlSession session_;
    std::set<std::string> gui_;
    std::set<int> expanded_;

    std::int64_t elapsed_ms() const {
        return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start_).count();
    }

    bool exhausted() const {
        return static_cast<int>(session_.states.size()) >= budget_.max_states || elapsed_ms() >= budget_.max_ms;
    }

    Action anonymous_entry() const {
        Action a = Action::web("GET", origin_ + "/");
        a.element = ElementKind::Entry;
        a.channel = cfg_.sut.default_channel;
        return a;
    }

    void note_url(const std::string& url) { gui_.insert(normalize_url(url)); }

    // Replays the path from a clean client and returns the output of `next`.
    WebOutput run_path(const std::vector<int>& path, const Action& next) {
        std::vector<Action> actions;
        for (int id : path) actions.push_back(session_.edges[static_cast<std::size_t>(id)].action);
        actions.push_back(next);
        InputSequence seq = make_sequence(std::move(actions), Origin::Crawler, "crawl");
        executor_.clear_cache();
        return *executor_.output_of(seq, seq.actions.size() - 1);
    }

    static std::string landing_url(const Action& a, const WebOutput& out) {
        if (!out.request_log.empty()) return out.request_log.back().url;
        return full_url(a);
    }

    bool same_site(const std::string& url) const { return !url.empty() && url_origin(url) == origin_; }

    bool skip_target(const std::string& url) const {
        ParsedUrl u = parse_url(url);
        return !cfg_.sut.reset_endpoint.empty() && u.path == cfg_.sut.reset_endpoint;
    }

    std::string fill_value(const HtmlField& f) const {
        for (const auto& [pattern, value] : cfg_.crawl.form_defaults)
            if (regex_search(f.name, pattern)) return value;
        if (!f.value.empty()) return f.value;
        return cfg_.crawl.default_value;
    }

    std::vector<Action> candidates(const std::string& page_url, const std::string& body) {
        std::vector<Action> out;
        PageElements els = scan_page(body);
        for (const auto& link : els.links) {
            std::string target = resolve_url(page_url, link.href);
            if (!same_site(target) || skip_target(target)) continue;
            note_url(target);
            Action a = Action::web("GET", strip_query(target));
            a.parameters = parse_query(query_of(target));
            a.element = ElementKind::Anchor;
            a.element_path = link.path;
            a.element_url = page_url;
            out.push_back(std::move(a));
        }
        for (const auto& form : els.forms) {
            std::string target = resolve_url(page_url, form.action.empty() ? page_url : form.action);
            if (!same_site(target) || skip_target(target)) continue;
            note_url(target);
            Params fields;
            for (const auto& f : form.fields) {
                if (f.name.empty() || f.type == "submit" || f.type == "button" || f.type == "file") continue;
                fields.emplace_back(f.name, f.type == "hidden" ? f.value : fill_value(f));
            }
            std::string method = form.method.empty() ? "GET" : form.method;
            Action a = Action::web(method, strip_query(target));
            a.parameters = parse_query(query_of(target));
            if (method == "GET")
                a.parameters.insert(a.parameters.end(), fields.begin(), fields.end());
            else
                a.form_inputs = std::move(fields);
            a.element = form.has_button ? ElementKind::Button : ElementKind::Script;
            a.element_path = form.path;
            a.element_url = page_url;
            out.push_back(std::move(a));
        }
        for (auto& a : out) {
            a.user = acting_;
            a.channel = cfg_.sut.default_channel;
        }
        return out;
    }

    void explore(int state, const std::vector<int>& path, const std::string& page_url, const std::string& body) {
        if (!expanded_.insert(state).second) return;
        std::set<std::string> tried;
        for (auto& a : candidates(page_url, body)) {
            if (exhausted()) return;
            std::string key = a.method + " " + normalize_url(full_url(a), a.form_inputs);
            if (!tried.insert(key).second) continue;
            WebOutput out = run_path(path, a);
            if (out.status == 0) continue;
            std::size_t before = session_.states.size();
            std::string url = landing_url(a, out);
            int to = classify_state(session_, url, out.body, cfg_.web.similarity_threshold);
            int id = static_cast<int>(session_.edges.size());
            std::string next_body = out.body;
            session_.edges.push_back({id, state, to, a, std::move(out)});
            if (session_.states.size() > before) {
                std::vector<int> next = path;
                next.push_back(id);
                explore(to, next, url, next_body);
            }
        }
    }
};

}  // namespace

CrawlSession crawl(const CampaignConfig& cfg, const User& user, Transport& transport, CrawlBudget budget) {
    return Crawler(cfg, user, transport, budget).run();
}

}  // namespace mst
