/*
   Copyright 2026 The Volcano Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include <volcano/normalize.hpp>

#include <array>
#include <cctype>
#include <map>
#include <unordered_set>

#include <volcano/error.hpp>

namespace volcano {

namespace {

enum class TokenKind { kIdentifier, kNumber, kString, kPunct };

struct Token {
    TokenKind kind;
    std::string text;
};

bool is_ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) != 0 || c == '_' || c == '$';
}

bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_' || c == '$';
}

// Longest first.
constexpr std::array<std::string_view, 27> kOperators = {
    ">>>=", ">>>", "<<=", ">>=", "**", "==", "!=", "<=", ">=", "&&", "||", "++", "--", "+=",
    "-=",   "*=",  "/=",  "%=",  "|=", "&=", "^=", "=>", "->", "<<", ">>", ":=", "=:",
};

std::vector<Token> tokenize(std::string_view s) {
    std::vector<Token> tokens;
    std::size_t i = 0;
    const std::size_t n = s.size();
    while (i < n) {
        const char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c)) != 0) {
            ++i;
        } else if (c == '/' && i + 1 < n && s[i + 1] == '/') {
            while (i < n && s[i] != '\n') ++i;
        } else if (c == '/' && i + 1 < n && s[i + 1] == '*') {
            const auto end = s.find("*/", i + 2);
            i = end == std::string_view::npos ? n : end + 2;
        } else if (c == '"' || c == '\'') {
            std::size_t j = i + 1;
            while (j < n && s[j] != c && s[j] != '\n') j += (s[j] == '\\' && j + 1 < n) ? 2 : 1;
            if (j < n && s[j] == c) ++j;
            tokens.push_back({TokenKind::kString, std::string{s.substr(i, j - i)}});
            i = j;
        } else if (is_ident_start(c)) {
            std::size_t j = i;
            while (j < n && is_ident_char(s[j])) ++j;
            tokens.push_back({TokenKind::kIdentifier, std::string{s.substr(i, j - i)}});
            i = j;
        } else if (std::isdigit(static_cast<unsigned char>(c)) != 0) {
            std::size_t j = i;
            while (j < n) {
                const char d = s[j];
                if (is_ident_char(d)) {
                    ++j;
                } else if (d == '.' && j + 1 < n && std::isdigit(static_cast<unsigned char>(s[j + 1])) != 0) {
                    ++j;
                } else if ((d == '+' || d == '-') && (s[j - 1] == 'e' || s[j - 1] == 'E') &&
                           s.substr(i, 2) != "0x") {
                    ++j;
                } else {
                    break;
                }
            }
            tokens.push_back({TokenKind::kNumber, std::string{s.substr(i, j - i)}});
            i = j;
        } else if (static_cast<unsigned char>(c) >= 0x80) {
            std::size_t j = i;
            while (j < n && static_cast<unsigned char>(s[j]) >= 0x80) ++j;
            tokens.push_back({TokenKind::kPunct, std::string{s.substr(i, j - i)}});
            i = j;
        } else {
            std::size_t len = 1;
            for (const auto op : kOperators) {
                if (s.substr(i, op.size()) == op) {
                    len = op.size();
                    break;
                }
            }
            tokens.push_back({TokenKind::kPunct, std::string{s.substr(i, len)}});
            i += len;
        }
    }
    return tokens;
}

std::string join_tokens(const std::vector<Token>& tokens) {
    std::string out;
    for (std::size_t k = 0; k < tokens.size(); ++k) {
        const bool dot = tokens[k].kind == TokenKind::kPunct && tokens[k].text == ".";
        const bool after_dot = k > 0 && tokens[k - 1].kind == TokenKind::kPunct && tokens[k - 1].text == ".";
        if (k > 0 && !dot && !after_dot) out.push_back(' ');
        out += tokens[k].text;
    }
    return out;
}

bool is_punct(const Token& t, std::string_view text) { return t.kind == TokenKind::kPunct && t.text == text; }

// `{` opening call options (`x.call{value: v}`, `new C{salt: s}`) rather than
// a block.
bool opens_inline_braces(const std::vector<Token>& tokens, std::size_t k) {
    if (k < 2) return false;
    const Token& prev = tokens[k - 1];
    if (prev.kind != TokenKind::kIdentifier || is_solidity_keyword(prev.text)) return false;
    const Token& before = tokens[k - 2];
    return is_punct(before, ".") || (before.kind == TokenKind::kIdentifier && before.text == "new");
}

const std::unordered_set<std::string_view>& keywords() {
    static const std::unordered_set<std::string_view> kKeywords = {
        "abstract", "after",     "alias",    "anonymous",   "apply",     "as",         "assembly", "auto",
        "break",    "calldata",  "case",     "catch",       "constant",  "constructor", "continue", "contract",
        "copyof",   "default",   "define",   "delete",      "do",        "else",       "emit",     "enum",
        "event",    "external",  "fallback", "false",       "final",     "for",        "function", "hex",
        "if",       "immutable", "implements", "import",    "in",        "indexed",    "inline",   "interface",
        "internal", "is",        "let",      "library",     "macro",     "match",      "memory",   "modifier",
        "mutable",  "new",       "null",     "of",          "override",  "partial",    "payable",  "pragma",
        "private",  "promise",   "public",   "pure",        "receive",   "reference",  "relocatable", "return",
        "returns",  "sealed",    "sizeof",   "solidity",    "static",    "storage",    "struct",   "super",
        "supports", "switch",    "throw",    "true",        "try",       "type",       "typedef",  "typeof",
        "unchecked", "unicode",  "using",    "var",         "view",      "virtual",    "while",    "wei",
        "gwei",     "szabo",     "finney",   "ether",       "seconds",   "minutes",    "hours",    "days",
        "weeks",    "years",     "_",
    };
    return kKeywords;
}

const std::unordered_set<std::string_view>& builtins() {
    static const std::unordered_set<std::string_view> kBuiltins = {
        // globals
        "msg", "block", "tx", "this", "now",
        // members and functions
        "sender", "value", "data", "call", "delegatecall", "send", "transfer", "require", "assert", "revert",
        "suicide", "selfdestruct", "length", "push",
        // elementary types without a size suffix
        "address", "bool", "string", "mapping", "byte",
    };
    return kBuiltins;
}

bool all_digits(std::string_view s) {
    for (const char c : s) {
        if (std::isdigit(static_cast<unsigned char>(c)) == 0) return false;
    }
    return true;
}

// uint*, int*, bytes*, fixed*, ufixed* (MxN).
bool is_elementary_type(std::string_view word) {
    if (word.empty()) return false;
    const auto sized = [&](std::string_view prefix, int step, int max) {
        const auto digits = word.substr(prefix.size());
        if (digits.empty()) return true;
        if (!all_digits(digits) || digits.size() > 3 || digits.front() == '0') return false;
        const int n = std::stoi(std::string{digits});
        return n % step == 0 && n <= max;
    };
    if (word.rfind("uint", 0) == 0) return sized("uint", 8, 256);
    if (word.rfind("int", 0) == 0) return sized("int", 8, 256);
    if (word.rfind("bytes", 0) == 0) return sized("bytes", 1, 32);
    if (word.front() == 'u') word.remove_prefix(1);
    if (word.substr(0, 5) != "fixed") return false;
    word.remove_prefix(5);
    if (word.empty()) return true;
    const auto x = word.find('x');
    return x != std::string_view::npos && x > 0 && x + 1 < word.size() && all_digits(word.substr(0, x)) &&
           all_digits(word.substr(x + 1));
}

std::string declared_name_of(const FunctionFragment& f) {
    if (f.name.empty() || f.name.front() != '<') return f.name;
    constexpr std::string_view kModifier = "<modifier:";
    if (f.name.rfind(kModifier, 0) == 0) return f.name.substr(kModifier.size(), f.name.size() - kModifier.size() - 1);
    return {};
}

template <typename Rename>
NormalizedFragment rename(const NormalizedFragment& nf, RenamingMode mode, Rename&& replacement_for) {
    if (nf.mode != RenamingMode::kNone) {
        throw Error(ErrorCode::kModeError, "fragment is already renamed (" + std::string{to_string(nf.mode)} + ")");
    }
    NormalizedFragment out;
    out.origin = nf.origin;
    out.mode = mode;
    out.declared_name = nf.declared_name;
    std::map<std::string, std::string> seen;
    bool header = true;
    for (const auto& line : nf.lines) {
        auto tokens = tokenize(line);
        for (std::size_t k = 0; k < tokens.size(); ++k) {
            auto& t = tokens[k];
            if (t.kind != TokenKind::kIdentifier) continue;
            // The name right after `function` / `modifier` in the header is
            // renamed even when it shadows an exempt word.
            const bool declaration = header && k > 0 && !nf.declared_name.empty() && t.text == nf.declared_name &&
                                     tokens[k - 1].kind == TokenKind::kIdentifier &&
                                     (tokens[k - 1].text == "function" || tokens[k - 1].text == "modifier");
            if (!declaration && is_exempt_identifier(t.text)) continue;
            auto it = seen.find(t.text);
            if (it == seen.end()) {
                it = seen.emplace(t.text, replacement_for(declaration)).first;
                out.renaming.emplace_back(t.text, it->second);
            }
            t.text = it->second;
        }
        header = false;
        out.lines.push_back(join_tokens(tokens));
    }
    out.line_digests.reserve(out.lines.size());
    for (const auto& l : out.lines) out.line_digests.push_back(line_digest(l));
    return out;
}

}  // namespace

std::string_view to_string(RenamingMode mode) {
    switch (mode) {
        case RenamingMode::kNone: return "none";
        case RenamingMode::kBlind: return "blind";
        case RenamingMode::kConsistent: return "consistent";
    }
    return "none";
}

std::optional<RenamingMode> parse_renaming_mode(std::string_view text) {
    if (text == "none") return RenamingMode::kNone;
    if (text == "blind") return RenamingMode::kBlind;
    if (text == "consistent") return RenamingMode::kConsistent;
    return std::nullopt;
}

FragmentRef ref_of(const FunctionFragment& f) {
    return {f.contract_id, f.name, f.start_line, f.start_col, f.end_line};
}

bool is_solidity_keyword(std::string_view word) { return keywords().contains(word); }

bool is_exempt_identifier(std::string_view word) {
    return keywords().contains(word) || builtins().contains(word) || is_elementary_type(word);
}

NormalizedFragment make_normalized(FragmentRef origin, RenamingMode mode, std::vector<std::string> lines,
                                   std::string declared_name) {
    NormalizedFragment nf;
    nf.origin = std::move(origin);
    nf.mode = mode;
    nf.declared_name = std::move(declared_name);
    nf.lines = std::move(lines);
    nf.line_digests.reserve(nf.lines.size());
    for (const auto& l : nf.lines) nf.line_digests.push_back(line_digest(l));
    return nf;
}

std::vector<std::string> pretty_print_text(std::string_view text) {
    const auto tokens = tokenize(text);
    std::vector<std::string> lines;
    std::vector<Token> current;
    auto flush = [&] {
        if (!current.empty()) {
            lines.push_back(join_tokens(current));
            current.clear();
        }
    };

    int paren_depth = 0;
    std::vector<bool> brace_inline;  // stack: true for call-option braces
    for (std::size_t k = 0; k < tokens.size(); ++k) {
        const Token& t = tokens[k];
        if (t.kind != TokenKind::kPunct) {
            current.push_back(t);
            continue;
        }
        const bool inside_inline = !brace_inline.empty() && brace_inline.back();
        if (t.text == "(" || t.text == "[") {
            ++paren_depth;
            current.push_back(t);
        } else if (t.text == ")" || t.text == "]") {
            paren_depth = std::max(0, paren_depth - 1);
            current.push_back(t);
        } else if (t.text == "{") {
            if (paren_depth > 0 || inside_inline || opens_inline_braces(tokens, k)) {
                brace_inline.push_back(true);
                current.push_back(t);
            } else {
                brace_inline.push_back(false);
                flush();
                lines.emplace_back("{");
            }
        } else if (t.text == "}") {
            const bool was_inline = !brace_inline.empty() && brace_inline.back();
            if (!brace_inline.empty()) brace_inline.pop_back();
            if (was_inline) {
                current.push_back(t);
            } else {
                flush();
                lines.emplace_back("}");
            }
        } else if (t.text == ";" && paren_depth == 0 && !inside_inline) {
            current.push_back(t);
            flush();
        } else {
            current.push_back(t);
        }
    }
    flush();
    return lines;
}

NormalizedFragment pretty_print(const FunctionFragment& fragment) {
    return make_normalized(ref_of(fragment), RenamingMode::kNone, pretty_print_text(fragment.text),
                           declared_name_of(fragment));
}

NormalizedFragment rename_blind(const NormalizedFragment& nf) {
    return rename(nf, RenamingMode::kBlind, [](bool) { return std::string{"X"}; });
}

NormalizedFragment rename_consistent(const NormalizedFragment& nf) {
    int next = 0;
    return rename(nf, RenamingMode::kConsistent,
                  [&next](bool declared) { return declared ? std::string{"X0"} : "X" + std::to_string(++next); });
}

NormalizedFragment normalize(const FunctionFragment& fragment, RenamingMode mode) {
    auto nf = pretty_print(fragment);
    switch (mode) {
        case RenamingMode::kNone: return nf;
        case RenamingMode::kBlind: return rename_blind(nf);
        case RenamingMode::kConsistent: return rename_consistent(nf);
    }
    return nf;
}

}  // namespace volcano
