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

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <volcano/digest.hpp>
#include <volcano/extractor.hpp>

namespace volcano {

enum class RenamingMode { kNone, kBlind, kConsistent };

std::string_view to_string(RenamingMode mode);
std::optional<RenamingMode> parse_renaming_mode(std::string_view text);

//! Identity of the fragment a normalized form came from.
struct FragmentRef {
    std::string contract_id;
    std::string name;
    int start_line{0};
    int start_col{0};
    int end_line{0};

    [[nodiscard]] FragmentKey key() const { return {contract_id, start_line, start_col}; }

    friend bool operator==(const FragmentRef&, const FragmentRef&) = default;
};

FragmentRef ref_of(const FunctionFragment& f);

struct NormalizedFragment {
    FragmentRef origin;
    RenamingMode mode{RenamingMode::kNone};
    //! Declared function or modifier name, empty for unnamed constructs.
    std::string declared_name;
    std::vector<std::string> lines;
    std::vector<LineDigest> line_digests;
    //! Original identifier -> replacement token, in first-occurrence order.
    std::vector<std::pair<std::string, std::string>> renaming;

    [[nodiscard]] std::size_t size() const noexcept { return lines.size(); }
};

//! Builds a NormalizedFragment from ready-made lines, computing digests.
NormalizedFragment make_normalized(FragmentRef origin, RenamingMode mode, std::vector<std::string> lines,
                                   std::string declared_name = {});

//! Layout-normalizes Solidity text: comments dropped, tokens separated by one
//! space (member access dots stay attached), one line per statement and one
//! per block brace. Semicolons inside parentheses do not split.
std::vector<std::string> pretty_print_text(std::string_view text);

NormalizedFragment pretty_print(const FunctionFragment& fragment);

//! Every renamable identifier becomes "X". Throws Error(kModeError) unless
//! `nf` is in mode NONE.
NormalizedFragment rename_blind(const NormalizedFragment& nf);

//! The fragment's declared name becomes "X0"; other renamable identifiers
//! become X1, X2, ... by first occurrence. Throws Error(kModeError) unless
//! `nf` is in mode NONE.
NormalizedFragment rename_consistent(const NormalizedFragment& nf);

NormalizedFragment normalize(const FunctionFragment& fragment, RenamingMode mode);

//! Keywords, builtin globals and members, and elementary type names are
//! never renamed.
bool is_exempt_identifier(std::string_view word);
bool is_solidity_keyword(std::string_view word);

}  // namespace volcano
