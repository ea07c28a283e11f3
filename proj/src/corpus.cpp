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

#include <volcano/corpus.hpp>

#include <algorithm>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>
#include <tuple>

#include <volcano/digest.hpp>
#include <volcano/error.hpp>
#include <volcano/extractor.hpp>

namespace volcano {

namespace fs = std::filesystem;

namespace {

struct Triple {
    int major{0};
    int minor{0};
    int patch{0};

    auto operator<=>(const Triple&) const = default;
};

struct Bound {
    Triple version;
    bool inclusive{true};
};

// Parsed comparator version; `parts` counts the numeric components given
// (wildcards "x"/"*" end the count).
struct PartialVersion {
    Triple version;
    int parts{0};
};

Triple bump(const PartialVersion& v) {
    // Smallest version strictly above every version matching the partial.
    switch (v.parts) {
        case 0: return {1 << 20, 0, 0};
        case 1: return {v.version.major + 1, 0, 0};
        case 2: return {v.version.major, v.version.minor + 1, 0};
        default: return {v.version.major, v.version.minor, v.version.patch + 1};
    }
}

Triple caret_upper(const PartialVersion& v) {
    if (v.version.major != 0 || v.parts < 2) return {v.version.major + 1, 0, 0};
    if (v.version.minor != 0 || v.parts < 3) return {0, v.version.minor + 1, 0};
    return {0, 0, v.version.patch + 1};
}

Triple tilde_upper(const PartialVersion& v) {
    if (v.parts < 2) return {v.version.major + 1, 0, 0};
    return {v.version.major, v.version.minor + 1, 0};
}

class Alternative {
  public:
    void raise_lower(Bound b) {
        if (!lower_ || b.version > lower_->version ||
            (b.version == lower_->version && !b.inclusive)) {
            lower_ = b;
        }
    }
    void lower_upper(Bound b) {
        if (!upper_ || b.version < upper_->version ||
            (b.version == upper_->version && !b.inclusive)) {
            upper_ = b;
        }
    }

    // Lowest admitted triple, if the range is non-empty.
    [[nodiscard]] std::optional<Triple> lowest() const {
        Triple low{};
        if (lower_) {
            low = lower_->version;
            if (!lower_->inclusive) low.patch += 1;
        }
        if (upper_) {
            if (upper_->inclusive ? low > upper_->version : low >= upper_->version) return std::nullopt;
        }
        return low;
    }

  private:
    std::optional<Bound> lower_;
    std::optional<Bound> upper_;
};

bool apply_comparator(Alternative& alt, const std::string& op, const PartialVersion& v) {
    const Triple base = v.version;
    if (op == "^") {
        alt.raise_lower({base, true});
        alt.lower_upper({caret_upper(v), false});
    } else if (op == "~") {
        alt.raise_lower({base, true});
        alt.lower_upper({tilde_upper(v), false});
    } else if (op == ">=") {
        alt.raise_lower({base, true});
    } else if (op == ">") {
        alt.raise_lower({bump(v), true});
    } else if (op == "<") {
        alt.lower_upper({base, false});
    } else if (op == "<=") {
        if (v.parts >= 3) {
            alt.lower_upper({base, true});
        } else {
            alt.lower_upper({bump(v), false});
        }
    } else if (op.empty() || op == "=") {
        alt.raise_lower({base, true});
        if (v.parts >= 3) {
            alt.lower_upper({base, true});
        } else {
            alt.lower_upper({bump(v), false});
        }
    } else {
        return false;
    }
    return true;
}

PartialVersion parse_partial(const std::smatch& m) {
    PartialVersion v;
    int* slots[] = {&v.version.major, &v.version.minor, &v.version.patch};
    for (int i = 0; i < 3; ++i) {
        const auto& part = m[static_cast<std::size_t>(i) + 2];
        if (!part.matched) break;
        const std::string s = part.str();
        if (s == "x" || s == "X" || s == "*") break;
        *slots[i] = std::stoi(s);
        v.parts = i + 1;
    }
    return v;
}

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string{s.substr(first, last - first + 1)};
}

std::string read_file(const fs::path& path) {
    std::ifstream in{path, std::ios::binary};
    if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return std::move(buf).str();
}

}  // namespace

std::string SolidityVersion::bucket() const {
    return "^" + std::to_string(major) + "." + std::to_string(minor);
}

SourceContract SourceContract::from_text(std::string id, std::string text, fs::path path) {
    SourceContract c;
    c.id = std::move(id);
    c.content_digest = sha256_hex(text);
    c.version = parse_pragma(text);
    c.source_text = std::move(text);
    c.path = std::move(path);
    return c;
}

std::string SourceContract::bucket() const {
    return version ? version->bucket() : std::string{kUnknownBucket};
}

bool is_valid_utf8(std::string_view bytes) noexcept {
    std::size_t i = 0;
    const std::size_t n = bytes.size();
    while (i < n) {
        const auto c = static_cast<unsigned char>(bytes[i]);
        std::size_t len = 0;
        std::uint32_t cp = 0;
        if (c < 0x80) {
            ++i;
            continue;
        } else if ((c & 0xe0) == 0xc0) {
            len = 2;
            cp = c & 0x1f;
        } else if ((c & 0xf0) == 0xe0) {
            len = 3;
            cp = c & 0x0f;
        } else if ((c & 0xf8) == 0xf0) {
            len = 4;
            cp = c & 0x07;
        } else {
            return false;
        }
        if (i + len > n) return false;
        for (std::size_t k = 1; k < len; ++k) {
            const auto cc = static_cast<unsigned char>(bytes[i + k]);
            if ((cc & 0xc0) != 0x80) return false;
            cp = (cp << 6) | (cc & 0x3f);
        }
        // Overlong forms, surrogates and out-of-range code points.
        if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000) ||
            (cp >= 0xd800 && cp <= 0xdfff) || cp > 0x10ffff) {
            return false;
        }
        i += len;
    }
    return true;
}

Corpus load_corpus(const fs::path& root, std::string label, Diagnostics* diag) {
    std::error_code ec;
    if (!fs::is_directory(root, ec)) {
        throw Error(ErrorCode::kMissingRoot, "corpus root does not exist: " + root.string());
    }

    std::vector<fs::path> files;
    for (auto it = fs::recursive_directory_iterator(root, fs::directory_options::skip_permission_denied);
         it != fs::recursive_directory_iterator(); ++it) {
        if (it->is_directory() && it->path().filename() == ".volcano-cache") {
            it.disable_recursion_pending();
            continue;
        }
        if (it->is_regular_file() && it->path().extension() == ".sol") files.push_back(it->path());
    }
    std::sort(files.begin(), files.end(),
              [](const fs::path& a, const fs::path& b) { return a.generic_string() < b.generic_string(); });

    Corpus corpus;
    corpus.label = std::move(label);
    std::size_t invalid = 0;
    for (const auto& file : files) {
        std::string text = read_file(file);
        if (!is_valid_utf8(text)) {
            ++invalid;
            warn(diag, WarningCode::kInvalidUtf8, "skipping non-UTF-8 file " + file.string());
            continue;
        }
        if (text.empty()) {
            warn(diag, WarningCode::kEmptySource, "skipping empty file " + file.string());
            continue;
        }
        corpus.contracts.push_back(
            SourceContract::from_text(fs::relative(file, root).generic_string(), std::move(text), file));
    }
    if (invalid > 0) {
        warn(diag, WarningCode::kInvalidUtf8, std::to_string(invalid) + " file(s) skipped as invalid UTF-8");
    }
    if (corpus.contracts.empty()) {
        warn(diag, WarningCode::kEmptyCorpus, "no .sol files admitted under " + root.string());
    }
    return corpus;
}

std::optional<SolidityVersion> lowest_admitted_version(std::string_view constraint) {
    static const std::regex kComparator{R"((\^|~|>=|<=|>|<|=)?\s*v?(\d+)(?:\.(\d+|[xX*]))?(?:\.(\d+|[xX*]))?)"};
    static const std::regex kHyphen{R"(^\s*v?(\d+(?:\.\d+){0,2})\s+-\s+v?(\d+(?:\.\d+){0,2})\s*$)"};

    std::optional<Triple> best;
    std::string text{constraint};
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto bar = text.find("||", start);
        std::string alt_text =
            trim(std::string_view{text}.substr(start, bar == std::string::npos ? std::string::npos : bar - start));
        start = bar == std::string::npos ? text.size() + 1 : bar + 2;

        std::smatch hy;
        if (std::regex_match(alt_text, hy, kHyphen)) {
            alt_text = ">=" + hy[1].str() + " <=" + hy[2].str();
        }

        Alternative alt;
        bool any = false;
        bool ok = true;
        for (auto it = std::sregex_iterator(alt_text.begin(), alt_text.end(), kComparator);
             it != std::sregex_iterator(); ++it) {
            ok = ok && apply_comparator(alt, (*it)[1].str(), parse_partial(*it));
            any = true;
        }
        if (!any || !ok) continue;
        if (auto low = alt.lowest(); low && (!best || *low < *best)) best = low;
    }
    if (!best) return std::nullopt;
    return SolidityVersion{best->major, best->minor, best->patch, trim(constraint)};
}

std::optional<SolidityVersion> parse_pragma(std::string_view source_text) {
    const std::string masked = mask_comments_and_strings(source_text);
    static const std::regex kPragma{R"(\bpragma\s+solidity\b)"};
    std::smatch m;
    if (!std::regex_search(masked, m, kPragma)) return std::nullopt;
    const auto begin = static_cast<std::size_t>(m.position(0) + m.length(0));
    auto end = masked.find(';', begin);
    if (end == std::string::npos) end = masked.size();
    return lowest_admitted_version(source_text.substr(begin, end - begin));
}

bool BucketOrder::operator()(const std::string& a, const std::string& b) const {
    auto key = [](const std::string& s) {
        if (s == kUnknownBucket) return std::tuple{1, 0, 0, s};
        int major = 0;
        int minor = 0;
        if (std::sscanf(s.c_str(), "^%d.%d", &major, &minor) == 2) return std::tuple{0, major, minor, s};
        return std::tuple{0, 1 << 20, 0, s};
    };
    return key(a) < key(b);
}

VersionBuckets sort_by_version(const Corpus& corpus) {
    VersionBuckets buckets;
    for (const auto& contract : corpus.contracts) {
        auto& bucket = buckets[contract.bucket()];
        if (bucket.label.empty()) bucket.label = corpus.label + "/" + contract.bucket();
        bucket.contracts.push_back(contract);
    }
    return buckets;
}

Corpus dedupe(const Corpus& corpus) {
    Corpus out;
    out.label = corpus.label;
    std::set<std::string> seen;
    for (const auto& contract : corpus.contracts) {
        if (seen.insert(contract.content_digest).second) out.contracts.push_back(contract);
    }
    return out;
}

nlohmann::json corpus_manifest(const Corpus& corpus) {
    auto entries = nlohmann::json::array();
    for (const auto& c : corpus.contracts) {
        entries.push_back({{"id", c.id},
                           {"digest", c.content_digest},
                           {"version_bucket", c.bucket()},
                           {"path", c.path.generic_string()}});
    }
    return {{"label", corpus.label}, {"contracts", std::move(entries)}};
}

}  // namespace volcano
