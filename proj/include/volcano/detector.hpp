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

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include <volcano/clone_engine.hpp>
#include <volcano/corpus.hpp>
#include <volcano/diagnostics.hpp>
#include <volcano/signatures.hpp>

namespace volcano {

struct Detection {
    std::string sig_id;
    VulnerabilityType vuln_type{VulnerabilityType::kReentrancy};
    FragmentRef target;
    //! Normalized line count of the target fragment.
    std::size_t target_lines{0};
    double similarity{0.0};
    RenamingMode mode{RenamingMode::kConsistent};
    double threshold_used{0.0};
    std::string solidity_bucket;

    friend bool operator==(const Detection&, const Detection&) = default;
};

//! Orders by target (contract, line, column), then sig_id.
bool canonical_less(const Detection& a, const Detection& b);

struct ContractTiming {
    std::string contract_id;
    double ms{0.0};
};

struct ScanTiming {
    std::vector<ContractTiming> per_contract;
    //! Sum of the per-contract times.
    double total_ms{0.0};

    //! Nullopt when no contract was scanned.
    [[nodiscard]] std::optional<double> average_ms() const;
};

//! A cross clone class: connected component of the detection graph, holding
//! at least one signature exemplar and one target fragment.
struct CrossClass {
    CloneClass clone_class;
    std::vector<VulnerabilityType> vuln_types;
    std::vector<std::string> sig_ids;
    std::vector<FragmentRef> targets;
};

using TypeCounts = std::map<VulnerabilityType, std::size_t>;

//! Every type present, zero where nothing was found.
TypeCounts zero_type_counts();

struct ScanReport {
    CloneConfig config;
    std::size_t contracts_scanned{0};
    std::size_t fragments_scanned{0};
    std::vector<Detection> detections;
    TypeCounts per_type_instances;
    std::vector<CrossClass> cross_classes;
    //! Number of cross classes each type takes part in.
    TypeCounts per_type_classes;
    ScanTiming timing;
};

//! Matches every admitted target fragment against every signature exemplar
//! in cfg.mode. Throws Error(kEmptySignatureSet).
ScanReport scan(const Corpus& target, const SignatureSet& sigs, const CloneConfig& cfg, unsigned jobs = 1,
                Diagnostics* diag = nullptr);

//! Distinct target fragments per type.
TypeCounts count_instances(const std::vector<Detection>& detections);
TypeCounts count_instances(const ScanReport& report);

//! Canonical JSON report. Timing goes into its own section and is left out
//! when `include_timing` is false so reports can be compared byte for byte.
nlohmann::json report_json(const ScanReport& report, bool include_timing = true);

//! One row per detection: contract_id,vuln_type,sig_id,function,lines,similarity,solidity_bucket.
std::string catalog_csv(const ScanReport& report);

//! Short human-readable summary.
std::string report_text(const ScanReport& report, bool include_timing = true);

struct TimingSummary {
    //! e.g. "average 00:00:00 (100ms), total 00:00:01"
    std::string text;
    nlohmann::json json;
};

//! Whole seconds, truncated, as HH:MM:SS with an "N days, " prefix past 24h.
std::string format_hms(double ms);
TimingSummary emit_timing(const ScanTiming& timing);

//! One analysis setting of the evolution report.
struct EvolutionCellConfig {
    RenamingMode mode;
    int threshold_percent;

    friend bool operator==(const EvolutionCellConfig&, const EvolutionCellConfig&) = default;
};

//! BLIND at 0% and CONSISTENT at 30%.
std::vector<EvolutionCellConfig> default_evolution_cells();

struct EvolutionCell {
    std::string bucket;
    VulnerabilityType vuln_type{VulnerabilityType::kReentrancy};
    EvolutionCellConfig setting{RenamingMode::kConsistent, 30};
    std::size_t class_count{0};
    std::size_t detection_count{0};
    //! Lowest detection similarity in whole percent; nullopt renders as NA.
    std::optional<int> min_similarity_percent;
};

//! A class of the whole-corpus scan whose targets fall in several buckets.
struct CrossBucketClass {
    EvolutionCellConfig setting{RenamingMode::kConsistent, 30};
    std::string class_id;
    std::vector<VulnerabilityType> vuln_types;
    std::vector<std::string> buckets;
};

struct EvolutionReport {
    std::vector<std::string> buckets;
    std::vector<EvolutionCellConfig> settings;
    //! Ordered by bucket, setting, type.
    std::vector<EvolutionCell> cells;
    //! Class counts of a single scan over all buckets, per setting and type.
    std::vector<std::pair<EvolutionCellConfig, TypeCounts>> unsorted_class_counts;
    std::vector<CrossBucketClass> cross_bucket_classes;

    [[nodiscard]] const EvolutionCell* find(std::string_view bucket, VulnerabilityType type,
                                            const EvolutionCellConfig& setting) const;
};

//! Scans each bucket independently for every setting. Classes never span
//! buckets in the per-bucket cells; classes that would span buckets in an
//! unsorted scan are listed in `cross_bucket_classes`.
EvolutionReport analyze_evolution(const VersionBuckets& buckets, const SignatureSet& sigs,
                                  const std::vector<EvolutionCellConfig>& settings = default_evolution_cells(),
                                  std::size_t min_lines = 3, unsigned jobs = 1, Diagnostics* diag = nullptr);

//! Rounds a similarity fraction to the nearest whole percent.
int to_percent(double similarity);

//! Long format: vuln_type,bucket,mode,threshold,class_count,min_similarity.
std::string evolution_csv(const EvolutionReport& report);
nlohmann::json evolution_json(const EvolutionReport& report);

}  // namespace volcano
