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

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include <volcano/clone_engine.hpp>
#include <volcano/corpus.hpp>
#include <volcano/diagnostics.hpp>

namespace volcano {

inline constexpr int kCacheFormatVersion = 1;

struct CachedContract {
    std::string id;
    std::string digest;
    //! Normalized in the cache's mode, already filtered by size.
    std::vector<NormalizedFragment> fragments;
};

struct CloneResult {
    std::vector<ClonePair> pairs;
    std::vector<CloneClass> classes;
};

//! State of a within-corpus clone analysis that can be extended
//! incrementally. Contracts are kept sorted by id.
struct AnalysisCache {
    int format_version{kCacheFormatVersion};
    std::string config_digest;
    CloneConfig config;
    std::vector<CachedContract> contracts;
    std::vector<ClonePair> pairs;

    [[nodiscard]] CloneResult result() const;
    [[nodiscard]] std::vector<NormalizedFragment> all_fragments() const;

    //! Writes `index.json` and one `objects/<digest>.json` per distinct content.
    void save(const std::filesystem::path& dir) const;

    //! Nullopt (with a kCacheFallback warning) when the directory is missing,
    //! unreadable, corrupt or of another format version.
    static std::optional<AnalysisCache> load(const std::filesystem::path& dir, Diagnostics* diag = nullptr);
};

//! Extracts and normalizes one contract for the given configuration.
CachedContract analyze_contract(const SourceContract& contract, const CloneConfig& cfg, Diagnostics* diag = nullptr);

//! From-scratch analysis.
AnalysisCache full_scan(const Corpus& corpus, const CloneConfig& cfg, unsigned jobs = 1, Diagnostics* diag = nullptr);

struct CorpusDelta {
    //! Added or modified contracts, matched to cached ones by id.
    Corpus changed;
    std::vector<std::string> removed;
};

//! Delta between a cache and the current corpus: new ids and ids whose
//! digest changed go to `changed`, cached ids absent from `current` to
//! `removed`.
CorpusDelta diff_against_cache(const AnalysisCache& cache, const Corpus& current);

struct IncrementalResult {
    CloneResult result;
    AnalysisCache cache;
    std::size_t renormalized_contracts{0};
};

//! Re-analyzes only the delta. Equal to full_scan over the updated corpus.
//! Throws Error(kCacheConfigMismatch) when the cache was built with another
//! configuration.
IncrementalResult incremental_scan(const AnalysisCache& cache, const CorpusDelta& delta, const CloneConfig& cfg,
                                   unsigned jobs = 1, Diagnostics* diag = nullptr);

//! Canonical `clones` report: config echo, pairs and classes whose members
//! carry their similarity to the class exemplar (first member).
nlohmann::json clones_report(const AnalysisCache& cache);

nlohmann::json to_json(const CloneConfig& cfg);
nlohmann::json to_json(const FragmentRef& ref);

}  // namespace volcano
