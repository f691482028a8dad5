#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

namespace mst {

using Headers = std::vector<std::pair<std::string, std::string>>;

struct HttpRequest {
    std::string method = "GET";
    std::string url;  // absolute, including the query string
    Headers headers;
    std::string body;
    std::string content_type;
};

struct HttpResponse {
    int status = 0;  // 0 when no response was received
    Headers headers;
    std::string body;
    std::string error;

    /// Values of every header with this name (case-insensitive).
    std::vector<std::string> header_values(const std::string& name) const;
};

class Transport {
public:
    virtual ~Transport() = default;
    virtual HttpResponse send(const HttpRequest& req) = 0;
};

/// Plain HTTP/1.1 client with one keep-alive connection per origin.
/// https URLs are reported as transport errors (no TLS support is built in).
class HttpTransport : public Transport {
public:
    explicit HttpTransport(int timeout_ms = 10000);
    ~HttpTransport() override;
    HttpResponse send(const HttpRequest& req) override;

private:
    struct Clients;
    int timeout_ms_;
    std::mutex mu_;
    std::unique_ptr<Clients> clients_;
};

}  // namespace mst
