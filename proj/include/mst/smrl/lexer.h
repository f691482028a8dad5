#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "mst/smrl/ast.h"

namespace mst::smrl {

/// Syntax or static-check failure with a source position.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, SourcePos pos, std::vector<std::string> expected = {});

    SourcePos pos() const { return pos_; }
    const std::vector<std::string>& expected() const { return expected_; }
    const std::string& message() const { return message_; }

private:
    std::string message_;
    SourcePos pos_;
    std::vector<std::string> expected_;
};

enum class TokKind { Ident, Int, String, Punct, End };

struct Token {
    TokKind kind = TokKind::End;
    std::string text;
    std::int64_t int_value = 0;
    SourcePos pos;
};

std::vector<Token> tokenize(const std::string& source);

}  // namespace mst::smrl
