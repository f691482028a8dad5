#pragma once

#include <string>

#include "mst/model.h"

namespace mst {

struct ParsedUrl {
    std::string scheme;
    std::string host;
    int port = 0;  // 0 when absent
    std::string path = "/";
    std::string query;
};

ParsedUrl parse_url(const std::string& url);

/// scheme://host[:port]
std::string url_origin(const std::string& url);
/// Path plus query of an absolute URL ("/" when empty).
std::string url_target(const std::string& url);
/// Replaces the origin of `url` with `origin`.
std::string with_origin(const std::string& url, const std::string& origin);
/// Resolves an href found on `page_url`; returns empty for non-http schemes.
std::string resolve_url(const std::string& page_url, const std::string& href);

/// Splits "a=1&b=2" into ordered, percent-decoded pairs.
Params parse_query(const std::string& query);
std::string build_query(const Params& params);

/// Percent-encodes every octet outside the RFC 3986 unreserved set.
std::string encode_url(const std::string& s);
std::string decode_url(const std::string& s);

/// Canonical key for set-membership queries: lowercase scheme and host,
/// default port dropped, query parameters sorted by name.
std::string normalize_url(const std::string& url, const Params& extra_params = {});

/// URL without its query string, normalized the same way.
std::string normalize_base(const std::string& url);

}  // namespace mst
