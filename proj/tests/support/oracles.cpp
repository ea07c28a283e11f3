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


#include "oracles.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>
#include <string>
#include <vector>

namespace volcano::testing {

namespace {

bool is_subsequence(std::span<const std::uint64_t> needle, std::span<const std::uint64_t> hay) {
    std::size_t j = 0;
    for (std::size_t i = 0; i < hay.size() && j < needle.size(); ++i) {
        if (hay[i] == needle[j]) ++j;
    }
    return j == needle.size();
}

// A version as written: up to three numeric parts, wildcards end it.
struct Written {
    int parts[3]{0, 0, 0};
    int count{0};
};

struct Comparator {
    std::string op;
    Written w;
};

int compare_prefix(const Version& v, const Written& w) {
    const int vp[3] = {v.major, v.minor, v.patch};
    for (int i = 0; i < w.count; ++i) {
        if (vp[i] != w.parts[i]) return vp[i] < w.parts[i] ? -1 : 1;
    }
    return 0;
}

Version floor_of(const Written& w) { return {w.parts[0], w.parts[1], w.parts[2]}; }

bool admits_one(const Comparator& c, const Version& v) {
    const int cmp = compare_prefix(v, c.w);
    if (c.op.empty() || c.op == "=") return cmp == 0;
    if (c.op == ">") return cmp > 0;
    if (c.op == ">=") return cmp >= 0;
    if (c.op == "<") return v < floor_of(c.w);
    if (c.op == "<=") return cmp <= 0;
    if (c.op == "~") {
        if (v < floor_of(c.w)) return false;
        Written keep = c.w;
        keep.count = std::min(c.w.count, 2);
        if (keep.count == 0) return true;
        return compare_prefix(v, keep) == 0;
    }
    if (c.op == "^") {
        if (v < floor_of(c.w)) return false;
        // Left-most non-zero component, or the last given one, must match.
        int fixed = 0;
        while (fixed < c.w.count - 1 && c.w.parts[fixed] == 0) ++fixed;
        Written keep = c.w;
        keep.count = std::min(fixed + 1, c.w.count);
        return compare_prefix(v, keep) == 0;
    }
    throw std::invalid_argument("unknown operator " + c.op);
}

std::vector<std::string> split(std::string_view s, std::string_view sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.emplace_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + sep.size();
    }
    return out;
}

Written parse_written(std::string_view s) {
    Written w;
    if (!s.empty() && (s[0] == 'v' || s[0] == 'V')) s.remove_prefix(1);
    for (const auto& part : split(s, ".")) {
        if (part.empty() || part == "x" || part == "X" || part == "*") break;
        if (w.count == 3) throw std::invalid_argument("too many version parts");
        w.parts[w.count++] = std::stoi(part);
    }
    return w;
}

std::vector<Comparator> parse_range(std::string_view text) {
    // Glue operators to their version, then split on blanks.
    std::string glued;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c)) != 0 && !glued.empty() &&
            std::string_view{"<>=^~"}.find(glued.back()) != std::string_view::npos) {
            continue;
        }
        glued.push_back(c);
    }
    std::vector<std::string> words;
    std::string word;
    for (const char c : glued) {
        if (std::isspace(static_cast<unsigned char>(c)) != 0) {
            if (!word.empty()) words.push_back(word);
            word.clear();
        } else {
            word.push_back(c);
        }
    }
    if (!word.empty()) words.push_back(word);

    std::vector<Comparator> out;
    if (words.size() == 3 && words[1] == "-") {
        out.push_back({">=", parse_written(words[0])});
        out.push_back({"<=", parse_written(words[2])});
        return out;
    }
    for (const auto& w : words) {
        std::size_t k = 0;
        while (k < w.size() && std::string_view{"<>=^~"}.find(w[k]) != std::string_view::npos) ++k;
        out.push_back({w.substr(0, k), parse_written(std::string_view{w}.substr(k))});
    }
    return out;
}

}  // namespace

std::size_t brute_force_lcs(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
    if (a.size() > b.size()) std::swap(a, b);
    if (a.size() > 20) throw std::invalid_argument("input too long for enumeration");
    std::size_t best = 0;
    std::vector<std::uint64_t> sub;
    for (std::uint32_t mask = 0; mask < (1U << a.size()); ++mask) {
        sub.clear();
        for (std::size_t i = 0; i < a.size(); ++i) {
            if ((mask >> i) & 1U) sub.push_back(a[i]);
        }
        if (sub.size() > best && is_subsequence(sub, b)) best = sub.size();
    }
    return best;
}

bool oracle_admits(std::string_view constraint, const Version& v) {
    for (const auto& alternative : split(constraint, "||")) {
        const auto comparators = parse_range(alternative);
        if (comparators.empty()) continue;
        if (std::all_of(comparators.begin(), comparators.end(),
                        [&](const Comparator& c) { return admits_one(c, v); })) {
            return true;
        }
    }
    return false;
}

std::optional<Version> oracle_lowest(std::string_view constraint) {
    for (int a = 0; a <= kGridMajor; ++a) {
        for (int b = 0; b <= kGridMinor; ++b) {
            for (int c = 0; c <= kGridPatch; ++c) {
                if (oracle_admits(constraint, {a, b, c})) return Version{a, b, c};
            }
        }
    }
    return std::nullopt;
}

}  // namespace volcano::testing
