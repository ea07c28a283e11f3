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
#include <span>
#include <string>
#include <vector>

#include <volcano/normalize.hpp>

namespace volcano {

//! Near-miss detection settings. BLIND mode corresponds to Type 3-2 clones,
//! CONSISTENT to Type 3-2c.
struct CloneConfig {
    static constexpr double kMaxDifferenceLimit = 0.30;

    RenamingMode mode{RenamingMode::kConsistent};
    double max_difference{0.30};
    std::size_t min_lines{3};
    std::optional<std::size_t> max_lines;

    //! Validating constructor: max_difference in [0, 0.30], min_lines >= 1,
    //! max_lines >= min_lines. Throws Error(kInvalidConfig).
    static CloneConfig make(RenamingMode mode, double max_difference, std::size_t min_lines = 3,
                            std::optional<std::size_t> max_lines = std::nullopt);

    //! Whole-percent convenience used by the CLI.
    static CloneConfig from_percent(RenamingMode mode, int threshold_percent, std::size_t min_lines = 3,
                                    std::optional<std::size_t> max_lines = std::nullopt);

    void validate() const;

    [[nodiscard]] bool admits(std::size_t line_count) const noexcept {
        return line_count >= min_lines && (!max_lines || line_count <= *max_lines);
    }

    //! Digest of every setting that influences normalized output and pairs.
    [[nodiscard]] std::string digest() const;

    friend bool operator==(const CloneConfig&, const CloneConfig&) = default;
};

//! Length of the longest common subsequence of two digest sequences.
std::size_t lcs_length(std::span<const LineDigest> a, std::span<const LineDigest> b);

//! |LCS(a, b)| / max(|a|, |b|). Throws Error(kEmptyFragment) on empty input.
double similarity(std::span<const LineDigest> a, std::span<const LineDigest> b);
double similarity(const std::vector<std::string>& a, const std::vector<std::string>& b);

//! True iff 1 - lcs / max(len_a, len_b) <= max_difference. The boundary is
//! inclusive and evaluated without accumulating rounding error.
bool within_difference(std::size_t lcs, std::size_t len_a, std::size_t len_b, double max_difference) noexcept;

//! Line counts alone already force the difference above the threshold.
bool size_prunable(std::size_t len_a, std::size_t len_b, double max_difference) noexcept;

//! Throws Error(kModeMismatch) if either fragment is not in cfg.mode.
//! Fragments outside the configured size range, and a fragment compared with
//! itself, are never pairs.
bool is_clone_pair(const NormalizedFragment& a, const NormalizedFragment& b, const CloneConfig& cfg);

//! Unordered pair stored with left < right by FragmentKey.
struct ClonePair {
    FragmentRef left;
    FragmentRef right;
    double similarity{0.0};

    friend bool operator==(const ClonePair&, const ClonePair&) = default;
};

bool canonical_less(const ClonePair& a, const ClonePair& b);

struct CloneClass {
    std::string class_id;
    //! Sorted by FragmentKey.
    std::vector<FragmentRef> members;

    friend bool operator==(const CloneClass&, const CloneClass&) = default;
};

//! All qualifying unordered pairs in canonical order.
std::vector<ClonePair> detect_pairs(std::span<const NormalizedFragment> fragments, const CloneConfig& cfg,
                                    unsigned jobs = 1);

//! Connected components of the pair graph. class_id is derived from the
//! sorted member keys, so it is stable across runs.
std::vector<CloneClass> cluster_classes(std::span<const ClonePair> pairs);

std::string class_id_for(const std::vector<std::string>& sorted_member_ids);

}  // namespace volcano
