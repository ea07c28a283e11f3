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

#include <volcano/clone_engine.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include <volcano/digest.hpp>
#include <volcano/error.hpp>
#include <volcano/parallel.hpp>

namespace volcano {

namespace {

// Absorbs representation error in products like 0.3 * 10.
constexpr double kEpsilon = 1e-9;

class DisjointSets {
  public:
    explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent_[std::max(a, b)] = std::min(a, b);
    }

  private:
    std::vector<std::size_t> parent_;
};

}  // namespace

CloneConfig CloneConfig::make(RenamingMode mode, double max_difference, std::size_t min_lines,
                              std::optional<std::size_t> max_lines) {
    CloneConfig cfg;
    cfg.mode = mode;
    cfg.max_difference = max_difference;
    cfg.min_lines = min_lines;
    cfg.max_lines = max_lines;
    cfg.validate();
    return cfg;
}

CloneConfig CloneConfig::from_percent(RenamingMode mode, int threshold_percent, std::size_t min_lines,
                                      std::optional<std::size_t> max_lines) {
    if (threshold_percent < 0 || threshold_percent > 30) {
        throw Error(ErrorCode::kInvalidConfig,
                    "threshold must be between 0 and 30 percent, got " + std::to_string(threshold_percent));
    }
    return make(mode, threshold_percent / 100.0, min_lines, max_lines);
}

void CloneConfig::validate() const {
    if (!(max_difference >= 0.0 && max_difference <= kMaxDifferenceLimit + kEpsilon)) {
        std::ostringstream msg;
        msg << "max_difference must be within [0, 0.30], got " << max_difference;
        throw Error(ErrorCode::kInvalidConfig, msg.str());
    }
    if (min_lines < 1) throw Error(ErrorCode::kInvalidConfig, "min_lines must be at least 1");
    if (max_lines && *max_lines < min_lines) {
        throw Error(ErrorCode::kInvalidConfig, "max_lines must not be below min_lines");
    }
}

std::string CloneConfig::digest() const {
    std::ostringstream s;
    s.precision(17);
    s << "normalizer=1;mode=" << to_string(mode) << ";max_difference=" << max_difference
      << ";min_lines=" << min_lines << ";max_lines=" << (max_lines ? std::to_string(*max_lines) : "none");
    return sha256_hex(s.str());
}

std::size_t lcs_length(std::span<const LineDigest> a, std::span<const LineDigest> b) {
    if (a.size() < b.size()) std::swap(a, b);
    std::vector<std::size_t> prev(b.size() + 1, 0);
    std::vector<std::size_t> cur(b.size() + 1, 0);
    for (const LineDigest x : a) {
        for (std::size_t j = 1; j <= b.size(); ++j) {
            cur[j] = x == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

double similarity(std::span<const LineDigest> a, std::span<const LineDigest> b) {
    if (a.empty() || b.empty()) throw Error(ErrorCode::kEmptyFragment, "similarity of an empty line sequence");
    return static_cast<double>(lcs_length(a, b)) / static_cast<double>(std::max(a.size(), b.size()));
}

double similarity(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    std::vector<LineDigest> da;
    std::vector<LineDigest> db;
    da.reserve(a.size());
    db.reserve(b.size());
    for (const auto& l : a) da.push_back(line_digest(l));
    for (const auto& l : b) db.push_back(line_digest(l));
    return similarity(da, db);
}

bool within_difference(std::size_t lcs, std::size_t len_a, std::size_t len_b, double max_difference) noexcept {
    const auto longest = static_cast<double>(std::max(len_a, len_b));
    return longest - static_cast<double>(lcs) <= max_difference * longest + kEpsilon;
}

bool size_prunable(std::size_t len_a, std::size_t len_b, double max_difference) noexcept {
    return !within_difference(std::min(len_a, len_b), len_a, len_b, max_difference);
}

bool is_clone_pair(const NormalizedFragment& a, const NormalizedFragment& b, const CloneConfig& cfg) {
    if (a.mode != cfg.mode || b.mode != cfg.mode) {
        throw Error(ErrorCode::kModeMismatch, "fragment renaming mode differs from the clone configuration");
    }
    if (a.origin.key() == b.origin.key()) return false;
    if (!cfg.admits(a.size()) || !cfg.admits(b.size())) return false;
    if (size_prunable(a.size(), b.size(), cfg.max_difference)) return false;
    return within_difference(lcs_length(a.line_digests, b.line_digests), a.size(), b.size(), cfg.max_difference);
}

bool canonical_less(const ClonePair& a, const ClonePair& b) {
    return std::pair{a.left.key(), a.right.key()} < std::pair{b.left.key(), b.right.key()};
}

std::vector<ClonePair> detect_pairs(std::span<const NormalizedFragment> fragments, const CloneConfig& cfg,
                                    unsigned jobs) {
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < fragments.size(); ++i) {
        if (fragments[i].mode != cfg.mode) {
            throw Error(ErrorCode::kModeMismatch, "fragment renaming mode differs from the clone configuration");
        }
        if (cfg.admits(fragments[i].size())) order.push_back(i);
    }
    // Ascending length lets the inner loop stop at the first partner that is
    // too long to reach the threshold.
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return fragments[x].size() < fragments[y].size(); });

    std::vector<std::vector<ClonePair>> found(order.size());
    parallel_for(order.size(), jobs, [&](std::size_t oi) {
        const auto& a = fragments[order[oi]];
        for (std::size_t oj = oi + 1; oj < order.size(); ++oj) {
            const auto& b = fragments[order[oj]];
            if (size_prunable(a.size(), b.size(), cfg.max_difference)) break;
            if (a.origin.key() == b.origin.key()) continue;
            const std::size_t lcs = lcs_length(a.line_digests, b.line_digests);
            if (!within_difference(lcs, a.size(), b.size(), cfg.max_difference)) continue;
            const double sim = static_cast<double>(lcs) / static_cast<double>(std::max(a.size(), b.size()));
            if (b.origin.key() < a.origin.key()) {
                found[oi].push_back({b.origin, a.origin, sim});
            } else {
                found[oi].push_back({a.origin, b.origin, sim});
            }
        }
    });

    std::vector<ClonePair> pairs;
    for (auto& f : found) std::move(f.begin(), f.end(), std::back_inserter(pairs));
    std::sort(pairs.begin(), pairs.end(), canonical_less);
    return pairs;
}

std::string class_id_for(const std::vector<std::string>& sorted_member_ids) {
    std::string joined;
    for (const auto& id : sorted_member_ids) {
        joined += id;
        joined.push_back('\n');
    }
    return sha256_hex(joined).substr(0, 16);
}

std::vector<CloneClass> cluster_classes(std::span<const ClonePair> pairs) {
    std::map<FragmentKey, std::size_t> index;
    std::vector<FragmentRef> refs;
    auto intern = [&](const FragmentRef& r) {
        auto [it, inserted] = index.try_emplace(r.key(), refs.size());
        if (inserted) refs.push_back(r);
        return it->second;
    };
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    edges.reserve(pairs.size());
    for (const auto& p : pairs) edges.emplace_back(intern(p.left), intern(p.right));

    DisjointSets sets{refs.size()};
    for (const auto& [a, b] : edges) sets.unite(a, b);

    std::map<std::size_t, std::vector<FragmentRef>> components;
    for (std::size_t i = 0; i < refs.size(); ++i) components[sets.find(i)].push_back(refs[i]);

    std::vector<CloneClass> classes;
    for (auto& [root, members] : components) {
        if (members.size() < 2) continue;
        std::sort(members.begin(), members.end(),
                  [](const FragmentRef& x, const FragmentRef& y) { return x.key() < y.key(); });
        std::vector<std::string> ids;
        ids.reserve(members.size());
        for (const auto& m : members) ids.push_back(m.key().to_string());
        classes.push_back({class_id_for(ids), std::move(members)});
    }
    std::sort(classes.begin(), classes.end(),
              [](const CloneClass& x, const CloneClass& y) { return x.members.front().key() < y.members.front().key(); });
    return classes;
}

}  // namespace volcano
