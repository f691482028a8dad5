#pragma once

#include <map>
#include <string>
#include <vector>

namespace mst {

/// Attack-string and file catalogs keyed by catalog name ("XSSInjection",
/// "CRLF", ...). File kinds hold paths.
class PayloadCatalogs {
public:
    /// Built-in catalogs; the first entry of XSSInjection, SQLInjection,
    /// CRLF and CodeInjection are the canonical examples of each kind.
    static PayloadCatalogs defaults();

    /// Replaces every catalog for which `<dir>/<name>.txt` exists. Relative
    /// entries of file kinds are resolved against `dir`.
    void load_dir(const std::string& dir);

    void set(const std::string& name, std::vector<std::string> entries);
    bool has(const std::string& name) const { return catalogs_.count(name) > 0; }
    /// Throws std::out_of_range for an unknown catalog.
    const std::vector<std::string>& entries(const std::string& name) const;
    const std::map<std::string, std::vector<std::string>>& all() const { return catalogs_; }

    static bool is_file_kind(const std::string& name);

private:
    std::map<std::string, std::vector<std::string>> catalogs_;
};

/// Names of the shipped catalogs.
const std::vector<std::string>& payload_catalog_names();

/// One entry per line; blank lines and lines starting with "#" are
/// skipped, "\n", "\r", "\t", "\0" and "\\" escapes are decoded.
std::vector<std::string> parse_payload_file(const std::string& text);

}  // namespace mst
