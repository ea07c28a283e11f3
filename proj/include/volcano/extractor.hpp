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

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <volcano/corpus.hpp>
#include <volcano/diagnostics.hpp>

namespace volcano {

//! One function-granularity code fragment. Sentinel names are used for
//! unnamed constructs: "<fallback>", "<receive>", "<constructor>" and
//! "<modifier:NAME>".
struct FunctionFragment {
    std::string contract_id;
    std::string name;
    int start_line{0};  // 1-based, inclusive
    int end_line{0};
    int start_col{0};  // 1-based byte column of the header keyword
    int end_col{0};    // 1-based byte column of the closing brace
    std::vector<std::string> raw_lines;
    //! Exact source text from the header keyword to the closing brace.
    std::string text;

    [[nodiscard]] int line_count() const noexcept { return end_line - start_line + 1; }
};

//! Stable identity of a fragment inside a corpus. Two fragments may share a
//! start line, so the column is part of the key.
struct FragmentKey {
    std::string contract_id;
    int start_line{0};
    int start_col{0};

    auto operator<=>(const FragmentKey&) const = default;

    [[nodiscard]] std::string to_string() const;
};

inline FragmentKey key_of(const FunctionFragment& f) { return {f.contract_id, f.start_line, f.start_col}; }

//! Same-length copy of `source_text` with comment bodies and string literal
//! contents replaced by spaces. Newlines and quote characters are kept.
std::string mask_comments_and_strings(std::string_view source_text, Diagnostics* diag = nullptr);

std::vector<FunctionFragment> extract_functions(const SourceContract& contract, Diagnostics* diag = nullptr);
std::vector<FunctionFragment> extract_functions(std::string_view contract_id, std::string_view source_text,
                                                Diagnostics* diag = nullptr);

//! Splits on '\n'; a trailing newline does not produce an extra empty line.
std::vector<std::string> split_lines(std::string_view text);

}  // namespace volcano
