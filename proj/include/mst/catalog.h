#pragma once

// Shipped relation catalog and the template-element pattern classifier.

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mst/smrl/ast.h"

namespace mst {

class CatalogError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ClassificationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Template-element instances, in table order.
struct PatternVector {
    bool user_precondition = false;
    bool action_precondition = false;
    bool same_user = false;
    bool different_user = false;
    bool same_actions = false;
    bool actions_subset = false;
    bool added_actions = false;
    bool modified_actions = false;
    bool verify_equality = false;
    bool verify_difference = false;
    bool verify_other_predicate = false;

    std::array<bool, 11> bits() const;
    static PatternVector from_bits(const std::array<bool, 11>& b);
    std::string to_string() const;  // "1,0,1,..."

    bool operator==(const PatternVector&) const = default;
};

struct PatternRow {
    std::string id;  // "P1" .. "P23"
    PatternVector vector;
};

const std::vector<PatternRow>& pattern_table();

struct Classification {
    PatternVector vector;
    std::optional<std::string> pattern_id;
};

/// Syntactic classification from the first IMPLIES of the relation. Throws
/// ClassificationError when the relation has no implication.
Classification classify_pattern(const smrl::RelationAst& ast);

struct CatalogEntry {
    std::string name;
    std::string file;
    std::vector<std::string> weaknesses;
    /// Fixture endpoints the relation is expected to flag.
    std::vector<std::string> fixture_endpoints;
    std::string source;
    smrl::RelationAst ast;
    Classification classification;
};

/// Loads `dir/manifest.json` and parses every listed file.
std::vector<CatalogEntry> load_catalog(const std::string& dir);

/// Parses one .smrl file; every relation it defines becomes an entry.
std::vector<CatalogEntry> load_relation_file(const std::string& path);

}  // namespace mst
