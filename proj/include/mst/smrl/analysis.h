#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mst/smrl/ast.h"

namespace mst::smrl {

/// Data functions of the DSL. Declaration order is only internal; the
/// canonical enumeration order is given by canonical_order().
enum class DataKind {
    Input,
    Action,
    ActionAvailableWithoutLogin,
    User,
    ParameterValueUsedByOtherUsers,
    RandomFilePath,
    RandomAdminFilePath,
    Log,
    HttpMethod,
    SQLInjectionString,
    CodeInjectionString,
    XSSInjectionString,
    StaticInjectionString,
    LDAPInjectionString,
    XQueryInjection,
    CommandInjection,
    CRLFAttackString,
    WeakPassword,
    SpecialCharacters,
    FileWithInvalidType,
    XMLInjectedFile,
    RandomValue,
    Output,
};

/// DSL function name, e.g. "XSSInjectionString".
const std::string& function_name(DataKind k);
std::optional<DataKind> data_kind_from_function(const std::string& name);
/// Payload catalog name for the attack-string kinds ("XSSInjection",
/// "CRLF", ...), nullopt for other kinds.
std::optional<std::string> payload_catalog_name(DataKind k);
std::optional<DataKind> data_kind_from_catalog(const std::string& catalog);

/// Kinds whose items are enumerated through provider views.
bool is_enumerable(DataKind k);

/// Input, User, then the rest alphabetically by function name.
std::vector<DataKind> canonical_order(const std::set<DataKind>& kinds);

/// Every data function referenced anywhere in the relation.
std::set<DataKind> extract_source_input_types(const RelationAst& ast);

/// Functions callable as free functions (data functions, operators and
/// web utilities).
bool is_known_function(const std::string& name);

/// Boolean toggles that may be assigned at the relation's top level.
bool is_known_flag(const std::string& name);

/// Throws ParseError on unbound variables, unknown functions, bad
/// operator arities or malformed follow-up definitions.
void static_check(const RelationAst& ast);

}  // namespace mst::smrl
