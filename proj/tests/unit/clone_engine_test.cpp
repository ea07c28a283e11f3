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


#include <random>
#include <set>

#include <gtest/gtest.h>

#include <volcano/clone_engine.hpp>
#include <volcano/error.hpp>
#include <volcano/extractor.hpp>

#include "fixtures.hpp"
#include "oracles.hpp"

namespace volcano {
namespace {

using Lines = std::vector<std::string>;

NormalizedFragment frag(const std::string& contract, int line, Lines lines,
                        RenamingMode mode = RenamingMode::kConsistent) {
    return make_normalized({contract, "f" + std::to_string(line), line, 1, line + 5}, mode, std::move(lines));
}

Lines numbered(int n, const std::string& prefix = "l") {
    Lines out;
    for (int i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i) + " ;");
    return out;
}

TEST(CloneConfig, Validation) {
    EXPECT_NO_THROW(CloneConfig::make(RenamingMode::kBlind, 0.0));
    EXPECT_NO_THROW(CloneConfig::make(RenamingMode::kBlind, 0.30));
    for (const double bad : {-0.01, 0.31, 1.0}) {
        try {
            CloneConfig::make(RenamingMode::kBlind, bad);
            FAIL() << bad;
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), ErrorCode::kInvalidConfig);
        }
    }
    EXPECT_THROW(CloneConfig::make(RenamingMode::kBlind, 0.1, 0), Error);
    EXPECT_THROW(CloneConfig::make(RenamingMode::kBlind, 0.1, 5, 4), Error);
    EXPECT_THROW(CloneConfig::from_percent(RenamingMode::kConsistent, 45), Error);
    EXPECT_DOUBLE_EQ(CloneConfig::from_percent(RenamingMode::kConsistent, 30).max_difference, 0.30);
}

TEST(CloneConfig, DigestTracksSettings) {
    const auto a = CloneConfig::make(RenamingMode::kConsistent, 0.3);
    EXPECT_EQ(a.digest(), CloneConfig::make(RenamingMode::kConsistent, 0.3).digest());
    EXPECT_NE(a.digest(), CloneConfig::make(RenamingMode::kBlind, 0.3).digest());
    EXPECT_NE(a.digest(), CloneConfig::make(RenamingMode::kConsistent, 0.2).digest());
    EXPECT_NE(a.digest(), CloneConfig::make(RenamingMode::kConsistent, 0.3, 4).digest());
    EXPECT_NE(a.digest(), CloneConfig::make(RenamingMode::kConsistent, 0.3, 3, 40).digest());
}

TEST(Similarity, Examples) {
    EXPECT_DOUBLE_EQ(similarity(Lines{"a", "b"}, Lines{"a", "b"}), 1.0);
    EXPECT_DOUBLE_EQ(similarity(Lines{"a", "b"}, Lines{"c", "d", "e"}), 0.0);
    EXPECT_DOUBLE_EQ(similarity(Lines{"p", "q", "r"}, Lines{"p", "x", "r"}), 2.0 / 3.0);
}

TEST(Similarity, EmptyIsAnError) {
    try {
        similarity(Lines{}, Lines{"a"});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::kEmptyFragment);
    }
    EXPECT_THROW(similarity(Lines{"a"}, Lines{}), Error);
}

TEST(Similarity, SymmetricAndReflexive) {
    std::mt19937_64 rng{3};
    std::uniform_int_distribution<int> len{1, 12};
    std::uniform_int_distribution<std::uint64_t> sym{0, 3};
    for (int i = 0; i < 2000; ++i) {
        std::vector<LineDigest> a(static_cast<std::size_t>(len(rng)));
        std::vector<LineDigest> b(static_cast<std::size_t>(len(rng)));
        for (auto& x : a) x = sym(rng);
        for (auto& x : b) x = sym(rng);
        EXPECT_EQ(similarity(a, b), similarity(b, a));
        EXPECT_EQ(similarity(a, a), 1.0);
    }
}

TEST(Similarity, MatchesEnumerationOracle) {
    std::mt19937_64 rng{8};
    std::uniform_int_distribution<int> len{0, 10};
    std::uniform_int_distribution<std::uint64_t> sym{0, 4};
    for (int i = 0; i < 3000; ++i) {
        std::vector<LineDigest> a(static_cast<std::size_t>(len(rng)));
        std::vector<LineDigest> b(static_cast<std::size_t>(len(rng)));
        for (auto& x : a) x = sym(rng);
        for (auto& x : b) x = sym(rng);
        EXPECT_EQ(lcs_length(a, b), testing::brute_force_lcs(a, b));
    }
}

TEST(IsClonePair, IdenticalAtZero) {
    const auto cfg = CloneConfig::make(RenamingMode::kConsistent, 0.0);
    EXPECT_TRUE(is_clone_pair(frag("a", 1, numbered(4)), frag("b", 1, numbered(4)), cfg));
}

TEST(IsClonePair, BoundaryInclusive) {
    const auto cfg = CloneConfig::make(RenamingMode::kConsistent, 0.30);
    // 10 vs 10 lines sharing exactly 7.
    Lines a = numbered(10);
    Lines b = numbered(10);
    for (int i : {1, 4, 8}) b[static_cast<std::size_t>(i)] = "changed" + std::to_string(i);
    ASSERT_EQ(testing::brute_force_lcs(frag("a", 1, a).line_digests, frag("b", 1, b).line_digests), 7u);
    EXPECT_TRUE(is_clone_pair(frag("a", 1, a), frag("b", 1, b), cfg));

    b[6] = "changed6";
    ASSERT_EQ(testing::brute_force_lcs(frag("a", 1, a).line_digests, frag("b", 1, b).line_digests), 6u);
    EXPECT_FALSE(is_clone_pair(frag("a", 1, a), frag("b", 1, b), cfg));
}

TEST(IsClonePair, WithinDifferenceBoundaryForAllSmallRatios) {
    for (std::size_t longest = 1; longest <= 60; ++longest) {
        for (std::size_t lcs = 0; lcs <= longest; ++lcs) {
            for (const int percent : {0, 10, 20, 30}) {
                // Exact rational comparison: (longest - lcs) / longest <= percent / 100.
                const bool expected = (longest - lcs) * 100 <= static_cast<std::size_t>(percent) * longest;
                EXPECT_EQ(within_difference(lcs, longest, longest, percent / 100.0), expected)
                    << lcs << "/" << longest << " at " << percent;
            }
        }
    }
}

TEST(IsClonePair, SelfAndModeRules) {
    const auto cfg = CloneConfig::make(RenamingMode::kConsistent, 0.3);
    const auto a = frag("a", 1, numbered(4));
    EXPECT_FALSE(is_clone_pair(a, a, cfg));
    const auto blind = frag("b", 1, numbered(4), RenamingMode::kBlind);
    try {
        is_clone_pair(a, blind, cfg);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::kModeMismatch);
    }
}

TEST(IsClonePair, SizeRange) {
    const auto cfg = CloneConfig::make(RenamingMode::kConsistent, 0.3, 5, 8);
    EXPECT_FALSE(is_clone_pair(frag("a", 1, numbered(4)), frag("b", 1, numbered(4)), cfg));
    EXPECT_TRUE(is_clone_pair(frag("a", 1, numbered(5)), frag("b", 1, numbered(5)), cfg));
    EXPECT_FALSE(is_clone_pair(frag("a", 1, numbered(9)), frag("b", 1, numbered(9)), cfg));
}

TEST(DetectPairs, CompleteGraph) {
    const std::vector<NormalizedFragment> frags = {frag("a", 1, numbered(4)), frag("b", 1, numbered(4)),
                                                   frag("c", 1, numbered(4))};
    const auto pairs = detect_pairs(frags, CloneConfig::make(RenamingMode::kConsistent, 0.0));
    ASSERT_EQ(pairs.size(), 3u);
    for (const auto& p : pairs) {
        EXPECT_LT(p.left.key(), p.right.key());
        EXPECT_EQ(p.similarity, 1.0);
    }
    EXPECT_TRUE(std::is_sorted(pairs.begin(), pairs.end(), canonical_less));
}

TEST(DetectPairs, SizePrefilter) {
    EXPECT_TRUE(size_prunable(3, 10, 0.30));
    EXPECT_FALSE(size_prunable(7, 10, 0.30));
    EXPECT_TRUE(size_prunable(6, 10, 0.30));
    const std::vector<NormalizedFragment> frags = {frag("a", 1, numbered(3)), frag("b", 1, numbered(10))};
    EXPECT_TRUE(detect_pairs(frags, CloneConfig::make(RenamingMode::kConsistent, 0.3)).empty());
}

TEST(DetectPairs, Empty) {
    EXPECT_TRUE(detect_pairs(std::vector<NormalizedFragment>{}, CloneConfig{}).empty());
}

TEST(DetectPairs, MatchesNaiveEnumerationAndIsJobIndependent) {
    std::mt19937_64 rng{21};
    std::uniform_int_distribution<int> len{3, 9};
    std::uniform_int_distribution<int> sym{0, 3};
    std::vector<NormalizedFragment> frags;
    for (int i = 0; i < 120; ++i) {
        Lines lines;
        const int n = len(rng);
        for (int k = 0; k < n; ++k) lines.push_back("s" + std::to_string(sym(rng)));
        frags.push_back(frag("c" + std::to_string(i % 17), i, lines));
    }
    for (const int percent : {0, 10, 20, 30}) {
        const auto cfg = CloneConfig::from_percent(RenamingMode::kConsistent, percent);
        std::set<std::pair<FragmentKey, FragmentKey>> naive;
        for (std::size_t i = 0; i < frags.size(); ++i) {
            for (std::size_t j = i + 1; j < frags.size(); ++j) {
                const std::size_t lcs = testing::brute_force_lcs(frags[i].line_digests, frags[j].line_digests);
                const std::size_t longest = std::max(frags[i].size(), frags[j].size());
                if ((longest - lcs) * 100 <= static_cast<std::size_t>(percent) * longest) {
                    auto a = frags[i].origin.key();
                    auto b = frags[j].origin.key();
                    if (b < a) std::swap(a, b);
                    naive.emplace(a, b);
                }
            }
        }
        const auto serial = detect_pairs(frags, cfg, 1);
        const auto parallel = detect_pairs(frags, cfg, 4);
        EXPECT_EQ(serial, parallel);
        std::set<std::pair<FragmentKey, FragmentKey>> got;
        for (const auto& p : serial) {
            got.emplace(p.left.key(), p.right.key());
            EXPECT_GE(p.similarity, 1.0 - cfg.max_difference - 1e-12);
        }
        EXPECT_EQ(got, naive) << percent;
    }
}

FragmentRef ref(const std::string& id) { return {id, id, 1, 1, 2}; }

ClonePair pair_of(const std::string& a, const std::string& b) { return {ref(a), ref(b), 1.0}; }

TEST(Cluster, Examples) {
    const auto chain = cluster_classes(std::vector<ClonePair>{pair_of("A", "B"), pair_of("B", "C")});
    ASSERT_EQ(chain.size(), 1u);
    EXPECT_EQ(chain[0].members.size(), 3u);

    const auto two = cluster_classes(std::vector<ClonePair>{pair_of("A", "B"), pair_of("C", "D")});
    EXPECT_EQ(two.size(), 2u);

    EXPECT_TRUE(cluster_classes(std::vector<ClonePair>{}).empty());
}

TEST(Cluster, PartitionAndStableIds) {
    std::mt19937_64 rng{31};
    std::uniform_int_distribution<int> node{0, 59};
    std::vector<ClonePair> pairs;
    for (int i = 0; i < 50; ++i) {
        std::string a = "n" + std::to_string(node(rng));
        std::string b = "n" + std::to_string(node(rng));
        if (a == b) continue;
        if (b < a) std::swap(a, b);
        pairs.push_back(pair_of(a, b));
    }
    const auto classes = cluster_classes(pairs);
    std::set<std::string> covered;
    std::set<std::string> in_pairs;
    for (const auto& p : pairs) {
        in_pairs.insert(p.left.contract_id);
        in_pairs.insert(p.right.contract_id);
    }
    std::set<std::string> ids;
    for (const auto& c : classes) {
        EXPECT_GE(c.members.size(), 2u);
        EXPECT_TRUE(ids.insert(c.class_id).second);
        for (const auto& m : c.members) EXPECT_TRUE(covered.insert(m.contract_id).second) << "overlap";
    }
    EXPECT_EQ(covered, in_pairs);

    // Connectivity: every pair lands inside one class.
    for (const auto& p : pairs) {
        int hits = 0;
        for (const auto& c : classes) {
            bool l = false;
            bool r = false;
            for (const auto& m : c.members) {
                l = l || m.contract_id == p.left.contract_id;
                r = r || m.contract_id == p.right.contract_id;
            }
            hits += l && r;
        }
        EXPECT_EQ(hits, 1);
    }

    auto shuffled = pairs;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    EXPECT_EQ(cluster_classes(shuffled), classes);
}

TEST(Monotonicity, Threshold) {
    std::mt19937_64 rng{77};
    std::uniform_int_distribution<int> len{3, 8};
    std::uniform_int_distribution<int> tok{0, 4};
    std::vector<NormalizedFragment> consistent;
    for (int i = 0; i < 80; ++i) {
        Lines c;
        const int n = len(rng);
        for (int k = 0; k < n; ++k) c.push_back("X" + std::to_string(tok(rng)) + " = 1 ;");
        consistent.push_back(frag("c" + std::to_string(i), i, c, RenamingMode::kConsistent));
    }
    std::set<std::pair<FragmentKey, FragmentKey>> previous;
    for (const int percent : {0, 10, 20, 30}) {
        std::set<std::pair<FragmentKey, FragmentKey>> now;
        for (const auto& p : detect_pairs(consistent, CloneConfig::from_percent(RenamingMode::kConsistent, percent))) {
            now.emplace(p.left.key(), p.right.key());
        }
        for (const auto& p : previous) EXPECT_TRUE(now.contains(p));
        previous = now;
    }
}

NormalizedFragment normalized(const std::string& text, RenamingMode mode) {
    return normalize(extract_functions("m.sol", text).at(0), mode);
}

double similarity_in(const std::string& a, const std::string& b, RenamingMode mode) {
    return similarity(normalized(a, mode).line_digests, normalized(b, mode).line_digests);
}

TEST(ModeHierarchy, BlindDominates) {
    std::mt19937_64 rng{13};
    std::vector<std::string> sources;
    for (int i = 0; i < 30; ++i) sources.push_back(testing::random_function("f" + std::to_string(i % 3), 1 + i % 4, rng));
    sources.push_back("function f(uint a) { a = 1; b = 2; }");
    sources.push_back("function f(uint b) { b = 2; }");
    for (const auto& a : sources) {
        for (const auto& b : sources) {
            const double blind = similarity_in(a, b, RenamingMode::kBlind);
            EXPECT_GE(blind, similarity_in(a, b, RenamingMode::kConsistent));
            EXPECT_GE(blind, similarity_in(a, b, RenamingMode::kNone));
        }
    }
}

// Consistent renaming can renumber a shared statement, so it does not
// dominate the unrenamed comparison.
TEST(ModeHierarchy, ConsistentDoesNotDominateNone) {
    const std::string a = "function f() { x = 1; y = 2; }";
    const std::string b = "function f() { y = 2; }";
    EXPECT_DOUBLE_EQ(similarity_in(a, b, RenamingMode::kNone), 4.0 / 5.0);
    EXPECT_DOUBLE_EQ(similarity_in(a, b, RenamingMode::kConsistent), 3.0 / 5.0);
}

}  // namespace
}  // namespace volcano
