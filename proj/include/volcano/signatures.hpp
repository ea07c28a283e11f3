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

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include <volcano/clone_engine.hpp>
#include <volcano/corpus.hpp>
#include <volcano/diagnostics.hpp>
#include <volcano/normalize.hpp>

namespace volcano {

enum class VulnerabilityType {
    kReentrancy,
    kDos,
    kIntegerUo,
    kCallToUnknown,
    kOutOfGas,
    kMishandledExceptions,
    kMismatchedTypecasting,
    kWeakModifiers,
};

inline constexpr std::array<VulnerabilityType, 8> kAllVulnerabilityTypes = {
    VulnerabilityType::kReentrancy,         VulnerabilityType::kDos,
    VulnerabilityType::kIntegerUo,          VulnerabilityType::kCallToUnknown,
    VulnerabilityType::kOutOfGas,           VulnerabilityType::kMishandledExceptions,
    VulnerabilityType::kMismatchedTypecasting, VulnerabilityType::kWeakModifiers,
};

//! Stable serialized name, e.g. "REENTRANCY", "INTEGER_UO".
std::string_view to_string(VulnerabilityType type);
std::optional<VulnerabilityType> parse_vulnerability_type(std::string_view text);

inline constexpr std::string_view kAnnotationPrefix = "@volcano:vuln=";
inline constexpr std::size_t kMinSignatureLines = 3;

struct VulnSignature {
    std::string sig_id;
    VulnerabilityType vuln_type{VulnerabilityType::kReentrancy};
    //! Exemplar as found in its source file.
    FunctionFragment source;
    //! Exemplar normalized in every mode. Origins use contract id "sig:<sig_id>".
    NormalizedFragment none;
    NormalizedFragment blind;
    NormalizedFragment consistent;
    std::string provenance;
    std::optional<std::string> origin_class;
    //! Not derived from a published pattern; kept out of acceptance metrics.
    bool placeholder{false};

    [[nodiscard]] const NormalizedFragment& exemplar(RenamingMode mode) const;
};

//! Builds a signature, normalizing `source` in all modes. Throws
//! Error(kInvalidConfig) if the exemplar has fewer than kMinSignatureLines
//! normalized lines.
VulnSignature make_signature(std::string sig_id, VulnerabilityType type, FunctionFragment source,
                             std::string provenance = {}, std::optional<std::string> origin_class = std::nullopt);

struct SignatureSet {
    std::vector<VulnSignature> signatures;
    std::string provenance;

    //! Throws Error(kInvalidConfig) on a duplicate sig_id.
    void add(VulnSignature sig);
    [[nodiscard]] const VulnSignature* find(std::string_view sig_id) const;
    [[nodiscard]] std::size_t size() const noexcept { return signatures.size(); }
    [[nodiscard]] bool empty() const noexcept { return signatures.empty(); }
};

//! Same ids, types, provenance and normalized exemplars in every mode.
bool equivalent(const SignatureSet& a, const SignatureSet& b);

//! Parses annotated signature source. Every function must be preceded by a
//! `// @volcano:vuln=<TYPE> [sig=<id>]` line (blank lines in between are
//! allowed). Throws Error(kMissingAnnotation) / Error(kUnknownType).
SignatureSet parse_signature_source(std::string_view file_id, std::string_view text);

//! Loads a `.sol` file or every `.sol` file under a directory. A
//! `manifest.json` next to the files supplies provenance.
SignatureSet load_signatures(const std::filesystem::path& path);

//! One `<sig_id>.sol` per signature plus `manifest.json`.
void save_signatures(const SignatureSet& set, const std::filesystem::path& dir);

nlohmann::json signature_manifest(const SignatureSet& set);

struct BuiltinListing {
    std::string sig_id;
    VulnerabilityType type;
    std::string caption;
    std::string source;
    bool placeholder{false};
};

//! Source text of each built-in signature as a standalone snippet.
const std::vector<BuiltinListing>& builtin_listings();

//! The published signature patterns plus one MISMATCHED_TYPECASTING placeholder.
SignatureSet builtin_signatures();

struct ReviewEntry {
    CloneClass clone_class;
    std::map<std::string, VulnerabilityType> member_labels;
};

struct DerivedSignatures {
    SignatureSet set;
    std::vector<ReviewEntry> review;
};

//! Clusters the labeled corpus and turns every label-pure clone class into a
//! signature whose exemplar is the median-size member. Mixed-label classes go
//! to `review`. Throws Error(kUnlabeledContract).
DerivedSignatures derive_signatures(const Corpus& vuln_corpus,
                                    const std::map<std::string, VulnerabilityType>& labels, const CloneConfig& cfg,
                                    unsigned jobs = 1, Diagnostics* diag = nullptr);

//! `contract_id,vuln_type` rows; a header row is optional.
std::map<std::string, VulnerabilityType> load_labels_csv(const std::filesystem::path& path);

nlohmann::json review_json(const std::vector<ReviewEntry>& review);

}  // namespace volcano
