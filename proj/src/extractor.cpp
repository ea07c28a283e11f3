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

#include <volcano/extractor.hpp>

#include <algorithm>
#include <cctype>
#include <optional>

namespace volcano {

namespace {

bool is_ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) != 0 || c == '_' || c == '$';
}

bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_' || c == '$';
}

bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

class LineIndex {
  public:
    explicit LineIndex(std::string_view text) {
        starts_.push_back(0);
        for (std::size_t i = 0; i < text.size(); ++i) {
            if (text[i] == '\n') starts_.push_back(i + 1);
        }
    }

    // 1-based line containing offset.
    [[nodiscard]] int line_of(std::size_t offset) const {
        const auto it = std::upper_bound(starts_.begin(), starts_.end(), offset);
        return static_cast<int>(it - starts_.begin());
    }

    [[nodiscard]] int column_of(std::size_t offset) const {
        return static_cast<int>(offset - starts_[static_cast<std::size_t>(line_of(offset) - 1)]) + 1;
    }

  private:
    std::vector<std::size_t> starts_;
};

struct Header {
    std::string name;
    std::size_t keyword_pos{0};
    std::size_t body_open{0};
};

enum class ScanResult { kBody, kNoBody, kEof };

// Walks forward from the end of a header keyword to the body's opening brace.
// A ';' or an unbalanced ')' / '}' at parenthesis depth 0 means there is no
// body (interface declarations, function-typed variables and parameters).
ScanResult find_body(std::string_view masked, std::size_t from, std::size_t& stop) {
    int depth = 0;
    for (std::size_t i = from; i < masked.size(); ++i) {
        switch (masked[i]) {
            case '(': ++depth; break;
            case ')':
                if (--depth < 0) {
                    stop = i;
                    return ScanResult::kNoBody;
                }
                break;
            case ';':
                if (depth == 0) {
                    stop = i;
                    return ScanResult::kNoBody;
                }
                break;
            case '{':
                if (depth == 0) {
                    stop = i;
                    return ScanResult::kBody;
                }
                break;
            case '}':
                if (depth == 0) {
                    stop = i;
                    return ScanResult::kNoBody;
                }
                break;
            default: break;
        }
    }
    stop = masked.size();
    return ScanResult::kEof;
}

std::optional<std::size_t> match_brace(std::string_view masked, std::size_t open) {
    int depth = 0;
    for (std::size_t i = open; i < masked.size(); ++i) {
        if (masked[i] == '{') {
            ++depth;
        } else if (masked[i] == '}') {
            if (--depth == 0) return i;
        }
    }
    return std::nullopt;
}

std::size_t skip_space(std::string_view s, std::size_t i) {
    while (i < s.size() && is_space(s[i])) ++i;
    return i;
}

std::string read_ident(std::string_view s, std::size_t i) {
    std::size_t j = i;
    while (j < s.size() && is_ident_char(s[j])) ++j;
    return std::string{s.substr(i, j - i)};
}

// `fallback` and `receive` are only keywords when they open a member
// declaration: previous significant char is a block/statement boundary and
// the next one is '('.
bool opens_special_function(std::string_view masked, std::size_t word_begin, std::size_t word_end) {
    const std::size_t next = skip_space(masked, word_end);
    if (next >= masked.size() || masked[next] != '(') return false;
    std::size_t i = word_begin;
    while (i > 0 && is_space(masked[i - 1])) --i;
    if (i == 0) return true;
    const char prev = masked[i - 1];
    return prev == ';' || prev == '{' || prev == '}';
}

}  // namespace

std::string FragmentKey::to_string() const {
    return contract_id + ":" + std::to_string(start_line) + ":" + std::to_string(start_col);
}

std::vector<std::string> split_lines(std::string_view text) {
    std::vector<std::string> lines;
    std::size_t begin = 0;
    while (begin < text.size()) {
        const auto nl = text.find('\n', begin);
        if (nl == std::string_view::npos) {
            lines.emplace_back(text.substr(begin));
            break;
        }
        lines.emplace_back(text.substr(begin, nl - begin));
        begin = nl + 1;
    }
    return lines;
}

std::string mask_comments_and_strings(std::string_view source_text, Diagnostics* diag) {
    std::string out{source_text};
    const std::size_t n = out.size();
    std::size_t i = 0;
    while (i < n) {
        const char c = source_text[i];
        if (c == '/' && i + 1 < n && source_text[i + 1] == '/') {
            while (i < n && source_text[i] != '\n') out[i++] = ' ';
        } else if (c == '/' && i + 1 < n && source_text[i + 1] == '*') {
            out[i] = out[i + 1] = ' ';
            i += 2;
            bool closed = false;
            while (i < n) {
                if (source_text[i] == '*' && i + 1 < n && source_text[i + 1] == '/') {
                    out[i] = out[i + 1] = ' ';
                    i += 2;
                    closed = true;
                    break;
                }
                if (source_text[i] != '\n') out[i] = ' ';
                ++i;
            }
            if (!closed) warn(diag, WarningCode::kUnterminatedComment, "unterminated block comment");
        } else if (c == '"' || c == '\'') {
            ++i;
            bool closed = false;
            while (i < n) {
                const char s = source_text[i];
                if (s == '\\' && i + 1 < n && source_text[i + 1] != '\n') {
                    out[i] = out[i + 1] = ' ';
                    i += 2;
                    continue;
                }
                if (s == c) {
                    ++i;
                    closed = true;
                    break;
                }
                if (s == '\n') break;  // string literals cannot span lines
                out[i++] = ' ';
            }
            if (!closed) warn(diag, WarningCode::kUnterminatedString, "unterminated string literal");
        } else {
            ++i;
        }
    }
    return out;
}

std::vector<FunctionFragment> extract_functions(std::string_view contract_id, std::string_view source_text,
                                                Diagnostics* diag) {
    const std::string masked = mask_comments_and_strings(source_text, diag);
    const LineIndex index{source_text};
    const auto source_lines = split_lines(source_text);

    std::vector<FunctionFragment> fragments;
    std::size_t i = 0;
    while (i < masked.size()) {
        if (!is_ident_start(masked[i]) || (i > 0 && is_ident_char(masked[i - 1]))) {
            ++i;
            continue;
        }
        const std::string word = read_ident(masked, i);
        const std::size_t word_end = i + word.size();

        std::optional<std::string> name;
        if (word == "function") {
            const std::size_t j = skip_space(masked, word_end);
            if (j < masked.size() && is_ident_start(masked[j])) {
                name = read_ident(masked, j);
            } else {
                name = "<fallback>";
            }
        } else if (word == "constructor") {
            name = "<constructor>";
        } else if (word == "modifier") {
            const std::size_t j = skip_space(masked, word_end);
            name = "<modifier:" + read_ident(masked, j) + ">";
        } else if ((word == "fallback" || word == "receive") && opens_special_function(masked, i, word_end)) {
            name = "<" + word + ">";
        }
        if (!name) {
            i = word_end;
            continue;
        }

        std::size_t stop = 0;
        const ScanResult scan = find_body(masked, word_end, stop);
        if (scan == ScanResult::kNoBody) {
            i = masked[stop] == ';' ? stop + 1 : word_end;
            continue;
        }
        const auto close = scan == ScanResult::kBody ? match_brace(masked, stop) : std::nullopt;
        if (!close) {
            warn(diag, WarningCode::kExtractionIncomplete,
                 std::string{contract_id} + ": unbalanced braces after line " + std::to_string(index.line_of(i)) +
                     "; remaining text skipped");
            break;
        }

        FunctionFragment f;
        f.contract_id = std::string{contract_id};
        f.name = std::move(*name);
        f.start_line = index.line_of(i);
        f.end_line = index.line_of(*close);
        f.start_col = index.column_of(i);
        f.end_col = index.column_of(*close);
        f.raw_lines.assign(source_lines.begin() + (f.start_line - 1), source_lines.begin() + f.end_line);
        f.text = std::string{source_text.substr(i, *close - i + 1)};
        fragments.push_back(std::move(f));
        i = *close + 1;
    }
    return fragments;
}

std::vector<FunctionFragment> extract_functions(const SourceContract& contract, Diagnostics* diag) {
    return extract_functions(contract.id, contract.source_text, diag);
}

}  // namespace volcano
