#include "mst/smrl/lexer.h"

#include <cctype>

namespace mst::smrl {

namespace {

std::string format_message(const std::string& message, SourcePos pos,
                           const std::vector<std::string>& expected) {
    std::string out = std::to_string(pos.line) + ":" + std::to_string(pos.column) + ": " + message;
    if (!expected.empty()) {
        out += " (expected ";
        for (std::size_t i = 0; i < expected.size(); ++i) {
            if (i) out += ", ";
            out += expected[i];
        }
        out += ")";
    }
    return out;
}

const char* const kPuncts[] = {"++", "--", "&&", "||", "==", "!=", "<=", ">=", "+=", "-=",
                               "(",  ")",  "{",  "}",  "[",  "]",  ";",  ",",  ".",  ":",
                               "<",  ">",  "!",  "+",  "-",  "*",  "/",  "%",  "="};

}  // namespace

ParseError::ParseError(const std::string& message, SourcePos pos, std::vector<std::string> expected)
    : std::runtime_error(format_message(message, pos, expected)),
      message_(message),
      pos_(pos),
      expected_(std::move(expected)) {}

std::vector<Token> tokenize(const std::string& src) {
    std::vector<Token> out;
    std::size_t i = 0;
    int line = 1;
    int col = 1;

    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };

    while (i < src.size()) {
        char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
            while (i < src.size() && src[i] != '\n') advance(1);
            continue;
        }
        if (c == '/' && i + 1 < src.size() && src[i + 1] == '*') {
            SourcePos start{line, col};
            advance(2);
            while (i < src.size() && !(src[i] == '*' && i + 1 < src.size() && src[i + 1] == '/'))
                advance(1);
            if (i >= src.size()) throw ParseError("unterminated comment", start);
            advance(2);
            continue;
        }

        Token t;
        t.pos = {line, col};

        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$') {
            std::size_t j = i;
            while (j < src.size() &&
                   (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_' || src[j] == '$'))
                ++j;
            t.kind = TokKind::Ident;
            t.text = src.substr(i, j - i);
            advance(j - i);
            out.push_back(std::move(t));
            continue;
        }

        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            t.kind = TokKind::Int;
            t.text = src.substr(i, j - i);
            try {
                t.int_value = std::stoll(t.text);
            } catch (const std::out_of_range&) {
                throw ParseError("integer literal out of range", t.pos);
            }
            // Java long suffix
            if (j < src.size() && (src[j] == 'L' || src[j] == 'l')) ++j;
            advance(j - i);
            out.push_back(std::move(t));
            continue;
        }

        if (c == '"' || c == '\'') {
            char quote = c;
            advance(1);
            std::string value;
            while (true) {
                if (i >= src.size() || src[i] == '\n') throw ParseError("unterminated string literal", t.pos);
                char d = src[i];
                if (d == quote) {
                    advance(1);
                    break;
                }
                if (d == '\\') {
                    if (i + 1 >= src.size()) throw ParseError("unterminated string literal", t.pos);
                    char e = src[i + 1];
                    advance(2);
                    switch (e) {
                        case 'n': value += '\n'; break;
                        case 't': value += '\t'; break;
                        case 'r': value += '\r'; break;
                        case '0': value += '\0'; break;
                        case '\\': value += '\\'; break;
                        case '"': value += '"'; break;
                        case '\'': value += '\''; break;
                        case 'u': {
                            if (i + 4 > src.size()) throw ParseError("bad \\u escape", t.pos);
                            unsigned cp = 0;
                            for (int k = 0; k < 4; ++k) {
                                char h = src[i];
                                if (!std::isxdigit(static_cast<unsigned char>(h)))
                                    throw ParseError("bad \\u escape", t.pos);
                                cp = cp * 16 + static_cast<unsigned>(std::isdigit(static_cast<unsigned char>(h))
                                                                         ? h - '0'
                                                                         : std::tolower(h) - 'a' + 10);
                                advance(1);
                            }
                            if (cp < 0x80) {
                                value += static_cast<char>(cp);
                            } else if (cp < 0x800) {
                                value += static_cast<char>(0xC0 | (cp >> 6));
                                value += static_cast<char>(0x80 | (cp & 0x3F));
                            } else {
                                value += static_cast<char>(0xE0 | (cp >> 12));
                                value += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
                                value += static_cast<char>(0x80 | (cp & 0x3F));
                            }
                            break;
                        }
                        default: throw ParseError(std::string("unknown escape \\") + e, t.pos);
                    }
                    continue;
                }
                value += d;
                advance(1);
            }
            t.kind = TokKind::String;
            t.text = std::move(value);
            out.push_back(std::move(t));
            continue;
        }

        bool matched = false;
        for (const char* p : kPuncts) {
            std::string_view pv(p);
            if (src.compare(i, pv.size(), pv) == 0) {
                t.kind = TokKind::Punct;
                t.text = std::string(pv);
                advance(pv.size());
                out.push_back(std::move(t));
                matched = true;
                break;
            }
        }
        if (!matched) throw ParseError(std::string("unexpected character '") + c + "'", t.pos);
    }

    Token end;
    end.kind = TokKind::End;
    end.pos = {line, col};
    out.push_back(end);
    return out;
}

}  // namespace mst::smrl
