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
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include <volcano/diagnostics.hpp>

namespace volcano {

//! Version bucket of a contract, taken from the lowest version its
//! `pragma solidity` constraint admits.
struct SolidityVersion {
    int major{0};
    int minor{0};
    int patch{0};
    std::string raw_constraint;

    //! "^0.4" style label used for version buckets.
    [[nodiscard]] std::string bucket() const;

    friend bool operator==(const SolidityVersion&, const SolidityVersion&) = default;
};

inline constexpr std::string_view kUnknownBucket = "unknown";

struct SourceContract {
    std::string id;
    std::string source_text;
    std::string content_digest;
    std::optional<SolidityVersion> version;
    std::filesystem::path path;

    //! Builds a contract from text, computing the digest and version.
    static SourceContract from_text(std::string id, std::string text, std::filesystem::path path = {});

    [[nodiscard]] std::string bucket() const;
};

struct Corpus {
    std::vector<SourceContract> contracts;
    std::string label;

    [[nodiscard]] std::size_t size() const noexcept { return contracts.size(); }
    [[nodiscard]] bool empty() const noexcept { return contracts.empty(); }
};

//! Loads every `.sol` file under `root` in lexicographic path order.
//! Throws Error(kMissingRoot) if `root` is not a directory. Invalid UTF-8 and
//! empty files are skipped with a warning.
Corpus load_corpus(const std::filesystem::path& root, std::string label, Diagnostics* diag = nullptr);

//! Version of the first `pragma solidity` directive outside comments, if any.
std::optional<SolidityVersion> parse_pragma(std::string_view source_text);

//! Lowest version admitted by a constraint such as "^0.4.24" or
//! ">=0.5.0 <0.7.0 || ^0.8". Returns nullopt if nothing is admitted or the
//! constraint does not parse.
std::optional<SolidityVersion> lowest_admitted_version(std::string_view constraint);

//! Buckets ordered by minor version, with "unknown" last.
struct BucketOrder {
    bool operator()(const std::string& a, const std::string& b) const;
};
using VersionBuckets = std::map<std::string, Corpus, BucketOrder>;

VersionBuckets sort_by_version(const Corpus& corpus);

//! Keeps the first contract for each content digest.
Corpus dedupe(const Corpus& corpus);

//! [{id, digest, bucket, path}] per contract.
nlohmann::json corpus_manifest(const Corpus& corpus);

bool is_valid_utf8(std::string_view bytes) noexcept;

}  // namespace volcano
