#include "mst/executor.h"

#include <cctype>
#include <fstream>
#include <iostream>
#include <sstream>

#include "mst/html.h"
#include "mst/url.h"
#include "mst/web_utils.h"

namespace mst {

namespace {

constexpr int kMaxRedirects = 5;

std::string lower(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

// Applies one Set-Cookie header (name/value plus Max-Age=0 deletion).
void apply_set_cookie(Session& jar, const std::string& header) {
    auto semi = header.find(';');
    std::string pair = header.substr(0, semi);
    auto eq = pair.find('=');
    if (eq == std::string::npos) return;
    auto trim = [](std::string s) {
        auto b = s.find_first_not_of(" \t");
        auto e = s.find_last_not_of(" \t");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    std::string name = trim(pair.substr(0, eq));
    std::string value = trim(pair.substr(eq + 1));
    if (name.empty()) return;
    bool expired = false;
    if (semi != std::string::npos) {
        std::string attrs = lower(header.substr(semi));
        expired = attrs.find("max-age=0") != std::string::npos;
    }
    if (expired)
        jar.erase(name);
    else
        jar.set(name, value);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string multipart_body(const Params& fields, const FileUpload& up, const std::string& boundary) {
    std::string body;
    for (const auto& [k, v] : fields) {
        body += "--" + boundary + "\r\n";
        body += "Content-Disposition: form-data; name=\"" + k + "\"\r\n\r\n";
        body += v + "\r\n";
    }
    std::string filename = up.path.substr(up.path.find_last_of('/') + 1);
    body += "--" + boundary + "\r\n";
    body += "Content-Disposition: form-data; name=\"" + up.field + "\"; filename=\"" + filename + "\"\r\n";
    body += "Content-Type: application/octet-stream\r\n\r\n";
    body += read_file(up.path) + "\r\n";
    body += "--" + boundary + "--\r\n";
    return body;
}

}  // namespace

Executor::Executor(SutConfig sut, WebConfig web, Transport& transport)
    : sut_(std::move(sut)), web_(std::move(web)), transport_(transport) {}

std::shared_ptr<const WebOutput> Executor::output_of(const InputSequence& seq, std::size_t i) {
    if (i >= seq.actions.size()) throw PositionError("Output", i, seq.actions.size());
    SeqState& st = states_[seq.id];
    std::size_t k = 0;
    while (k < st.executed.size() && k < seq.actions.size() && st.executed[k] == seq.actions[k]) ++k;
    if (k < st.executed.size()) st = SeqState{};  // the sequence changed below the cached prefix
    while (st.outputs.size() <= i) {
        const Action& a = seq.actions[st.outputs.size()];
        auto out = execute(a, st, seq.id);
        st.executed.push_back(a);
        st.outputs.push_back(std::move(out));
    }
    return st.outputs[i];
}

HttpResponse Executor::send_logged(HttpRequest req, const std::string& seq_id, std::vector<RequestRecord>& log) {
    journal_.push_back({req.method, req.url, seq_id});
    log.push_back({req.method, req.url});
    return transport_.send(req);
}

std::shared_ptr<const WebOutput> Executor::execute(const Action& a, SeqState& st, const std::string& seq_id) {
    auto out = std::make_shared<WebOutput>();
    switch (a.kind) {
        case ActionKind::Wait:
            st.clock_ms += a.duration_ms;
            out->status = 200;
            out->session = st.jar;
            return out;
        case ActionKind::ResetSut:
            reset_sut(seq_id);
            st.jar = Session();
            out->status = 200;
            return out;
        case ActionKind::Web: break;
    }

    if (a.session_override) st.jar = *a.session_override;

    std::string base = a.channel == Channel::Http && !sut_.insecure_base.empty() ? sut_.insecure_base
                                                                                 : sut_.secure_base;
    HttpRequest req;
    req.method = a.method.empty() ? "GET" : a.method;
    req.url = with_origin(full_url(a), url_origin(base));
    if (req.method != "GET" && req.method != "HEAD") {
        if (a.upload) {
            std::string boundary = "----mst-boundary-7c1f";
            req.body = multipart_body(a.form_inputs, *a.upload, boundary);
            req.content_type = "multipart/form-data; boundary=" + boundary;
        } else {
            req.body = build_query(a.form_inputs);
            req.content_type = "application/x-www-form-urlencoded";
        }
    }

    for (int hop = 0;; ++hop) {
        req.headers.clear();
        if (!st.jar.empty()) req.headers.emplace_back("Cookie", st.jar.to_cookie_header());
        if (st.clock_ms > 0) req.headers.emplace_back(kClockOffsetHeader, std::to_string(st.clock_ms));
        HttpResponse res = send_logged(req, seq_id, out->request_log);
        if (res.status == 0) {
            out->status = 0;
            out->body.clear();
            break;
        }
        for (const auto& sc : res.header_values("Set-Cookie")) apply_set_cookie(st.jar, sc);
        out->status = res.status;
        out->body = res.body;
        auto location = res.header_values("Location");
        bool redirect = res.status >= 300 && res.status < 400 && !location.empty();
        if (!redirect || hop >= kMaxRedirects) break;
        std::string next = resolve_url(req.url, location.front());
        if (next.empty()) break;
        req.method = "GET";
        req.url = next;
        req.body.clear();
        req.content_type.clear();
    }
    out->session = st.jar;
    out->has_alert = keep_dialogs_open_ && contains_executable_alert(out->body, web_.alert_marker);
    return out;
}

bool Executor::reset_sut(const std::string& sequence_id) {
    if (sut_.reset_endpoint.empty()) {
        std::cerr << "warning: no reset endpoint configured; SUT state not reset\n";
        return false;
    }
    HttpRequest req;
    req.method = "POST";
    req.url = resolve_url(sut_.secure_base + "/", sut_.reset_endpoint);
    req.content_type = "application/x-www-form-urlencoded";
    journal_.push_back({req.method, req.url, sequence_id});
    HttpResponse res = transport_.send(req);
    return res.status >= 200 && res.status < 300;
}

std::vector<RequestRecord> Executor::requests_for(const std::string& sequence_id) const {
    std::vector<RequestRecord> out;
    for (const auto& e : journal_)
        if (e.sequence_id == sequence_id) out.push_back({e.method, e.url});
    return out;
}

}  // namespace mst
