#include "mst/transport.h"

#include <cctype>

#include "httplib.h"
#include "mst/url.h"

namespace mst {

namespace {

bool iequals(const std::string& a, const std::string& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (std::tolower(static_cast<unsigned char>(a[i])) != std::tolower(static_cast<unsigned char>(b[i])))
            return false;
    return true;
}

}  // namespace

std::vector<std::string> HttpResponse::header_values(const std::string& name) const {
    std::vector<std::string> out;
    for (const auto& [k, v] : headers)
        if (iequals(k, name)) out.push_back(v);
    return out;
}

struct HttpTransport::Clients {
    std::map<std::string, std::unique_ptr<httplib::Client>> by_origin;
};

HttpTransport::HttpTransport(int timeout_ms) : timeout_ms_(timeout_ms), clients_(std::make_unique<Clients>()) {}

HttpTransport::~HttpTransport() = default;

HttpResponse HttpTransport::send(const HttpRequest& req) {
    HttpResponse out;
    ParsedUrl u = parse_url(req.url);
    if (u.scheme != "http") {
        out.error = "unsupported scheme '" + u.scheme + "' in " + req.url;
        return out;
    }
    std::string origin = url_origin(req.url);

    std::lock_guard<std::mutex> lock(mu_);
    auto& cli = clients_->by_origin[origin];
    if (!cli) {
        cli = std::make_unique<httplib::Client>(origin);
        cli->set_keep_alive(true);
        cli->set_follow_location(false);
        time_t sec = timeout_ms_ / 1000;
        time_t usec = (timeout_ms_ % 1000) * 1000;
        cli->set_connection_timeout(sec, usec);
        cli->set_read_timeout(sec, usec);
        cli->set_write_timeout(sec, usec);
    }

    httplib::Request r;
    r.method = req.method;
    r.path = url_target(req.url);
    for (const auto& [k, v] : req.headers) r.headers.emplace(k, v);
    if (!req.body.empty() || req.method == "POST" || req.method == "PUT") {
        r.body = req.body;
        if (!req.content_type.empty()) r.headers.emplace("Content-Type", req.content_type);
    }

    auto res = cli->send(r);
    if (!res) {
        out.error = httplib::to_string(res.error());
        // Drop the connection so the next request starts clean.
        cli.reset();
        return out;
    }
    out.status = res->status;
    out.body = res->body;
    for (const auto& [k, v] : res->headers) out.headers.emplace_back(k, v);
    return out;
}

}  // namespace mst
