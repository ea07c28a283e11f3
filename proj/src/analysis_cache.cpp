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

#include <volcano/analysis_cache.hpp>

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <volcano/error.hpp>
#include <volcano/parallel.hpp>

namespace volcano {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json fragment_to_json(const NormalizedFragment& nf) {
    return {{"name", nf.origin.name},
            {"start_line", nf.origin.start_line},
            {"start_col", nf.origin.start_col},
            {"end_line", nf.origin.end_line},
            {"declared_name", nf.declared_name},
            {"lines", nf.lines}};
}

NormalizedFragment fragment_from_json(const json& j, const std::string& contract_id, RenamingMode mode) {
    FragmentRef ref{contract_id, j.at("name").get<std::string>(), j.at("start_line").get<int>(),
                    j.at("start_col").get<int>(), j.at("end_line").get<int>()};
    return make_normalized(std::move(ref), mode, j.at("lines").get<std::vector<std::string>>(),
                           j.at("declared_name").get<std::string>());
}

FragmentRef ref_from_json(const json& j) {
    return {j.at("contract_id").get<std::string>(), j.at("name").get<std::string>(), j.at("start_line").get<int>(),
            j.at("start_col").get<int>(), j.at("end_line").get<int>()};
}

CloneConfig config_from_json(const json& j) {
    const auto mode = parse_renaming_mode(j.at("mode").get<std::string>());
    if (!mode) throw std::runtime_error("bad mode");
    std::optional<std::size_t> max_lines;
    if (!j.at("max_lines").is_null()) max_lines = j.at("max_lines").get<std::size_t>();
    return CloneConfig::make(*mode, j.at("max_difference").get<double>(), j.at("min_lines").get<std::size_t>(),
                             max_lines);
}

void write_json(const fs::path& path, const json& j) {
    std::ofstream out{path, std::ios::binary | std::ios::trunc};
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
    out << j.dump(1) << '\n';
}

json read_json(const fs::path& path) {
    std::ifstream in{path, std::ios::binary};
    if (!in) throw std::runtime_error("cannot read " + path.string());
    return json::parse(in);
}

// Pairs between every fragment of `fresh` and every fragment of `existing`.
std::vector<ClonePair> cross_pairs(const std::vector<NormalizedFragment>& fresh,
                                   const std::vector<NormalizedFragment>& existing, const CloneConfig& cfg,
                                   unsigned jobs) {
    std::vector<std::vector<ClonePair>> found(fresh.size());
    parallel_for(fresh.size(), jobs, [&](std::size_t i) {
        const auto& a = fresh[i];
        for (const auto& b : existing) {
            if (!is_clone_pair(a, b, cfg)) continue;
            const double sim = similarity(a.line_digests, b.line_digests);
            if (b.origin.key() < a.origin.key()) {
                found[i].push_back({b.origin, a.origin, sim});
            } else {
                found[i].push_back({a.origin, b.origin, sim});
            }
        }
    });
    std::vector<ClonePair> out;
    for (auto& f : found) std::move(f.begin(), f.end(), std::back_inserter(out));
    return out;
}

}  // namespace

json to_json(const CloneConfig& cfg) {
    return {{"mode", to_string(cfg.mode)},
            {"max_difference", cfg.max_difference},
            {"min_lines", cfg.min_lines},
            {"max_lines", cfg.max_lines ? json(*cfg.max_lines) : json(nullptr)}};
}

json to_json(const FragmentRef& ref) {
    return {{"contract_id", ref.contract_id},
            {"name", ref.name},
            {"start_line", ref.start_line},
            {"start_col", ref.start_col},
            {"end_line", ref.end_line}};
}

CloneResult AnalysisCache::result() const { return {pairs, cluster_classes(pairs)}; }

std::vector<NormalizedFragment> AnalysisCache::all_fragments() const {
    std::vector<NormalizedFragment> out;
    for (const auto& c : contracts) out.insert(out.end(), c.fragments.begin(), c.fragments.end());
    return out;
}

void AnalysisCache::save(const fs::path& dir) const {
    fs::create_directories(dir / "objects");
    auto index_contracts = json::array();
    std::set<std::string> written;
    for (const auto& c : contracts) {
        index_contracts.push_back({{"id", c.id}, {"digest", c.digest}});
        if (!written.insert(c.digest).second) continue;
        auto frags = json::array();
        for (const auto& f : c.fragments) frags.push_back(fragment_to_json(f));
        write_json(dir / "objects" / (c.digest + ".json"),
                   {{"format_version", format_version}, {"digest", c.digest}, {"fragments", std::move(frags)}});
    }
    auto pair_list = json::array();
    for (const auto& p : pairs) {
        pair_list.push_back({{"left", to_json(p.left)}, {"right", to_json(p.right)}, {"similarity", p.similarity}});
    }
    write_json(dir / "index.json", {{"format_version", format_version},
                                    {"config_digest", config_digest},
                                    {"config", to_json(config)},
                                    {"contracts", std::move(index_contracts)},
                                    {"pairs", std::move(pair_list)}});
}

std::optional<AnalysisCache> AnalysisCache::load(const fs::path& dir, Diagnostics* diag) {
    if (!fs::exists(dir / "index.json")) return std::nullopt;
    try {
        const json index = read_json(dir / "index.json");
        AnalysisCache cache;
        cache.format_version = index.at("format_version").get<int>();
        if (cache.format_version != kCacheFormatVersion) {
            warn(diag, WarningCode::kCacheFallback,
                 "cache format version " + std::to_string(cache.format_version) + " is not supported; rebuilding");
            return std::nullopt;
        }
        cache.config_digest = index.at("config_digest").get<std::string>();
        cache.config = config_from_json(index.at("config"));
        if (cache.config.digest() != cache.config_digest) throw std::runtime_error("config digest mismatch");

        std::map<std::string, json> objects;
        for (const auto& entry : index.at("contracts")) {
            CachedContract c;
            c.id = entry.at("id").get<std::string>();
            c.digest = entry.at("digest").get<std::string>();
            auto it = objects.find(c.digest);
            if (it == objects.end()) {
                it = objects.emplace(c.digest, read_json(dir / "objects" / (c.digest + ".json"))).first;
                if (it->second.at("digest").get<std::string>() != c.digest) {
                    throw std::runtime_error("object digest mismatch");
                }
            }
            for (const auto& f : it->second.at("fragments")) {
                c.fragments.push_back(fragment_from_json(f, c.id, cache.config.mode));
            }
            cache.contracts.push_back(std::move(c));
        }
        for (const auto& p : index.at("pairs")) {
            cache.pairs.push_back(
                {ref_from_json(p.at("left")), ref_from_json(p.at("right")), p.at("similarity").get<double>()});
        }
        return cache;
    } catch (const std::exception& e) {
        warn(diag, WarningCode::kCacheFallback,
             "ignoring unreadable cache at " + dir.string() + " (" + e.what() + "); running a full analysis");
        return std::nullopt;
    }
}

CachedContract analyze_contract(const SourceContract& contract, const CloneConfig& cfg, Diagnostics* diag) {
    CachedContract out;
    out.id = contract.id;
    out.digest = contract.content_digest;
    for (const auto& fragment : extract_functions(contract, diag)) {
        auto nf = normalize(fragment, cfg.mode);
        if (cfg.admits(nf.size())) out.fragments.push_back(std::move(nf));
    }
    return out;
}

AnalysisCache full_scan(const Corpus& corpus, const CloneConfig& cfg, unsigned jobs, Diagnostics* diag) {
    cfg.validate();
    AnalysisCache cache;
    cache.config = cfg;
    cache.config_digest = cfg.digest();
    cache.contracts.resize(corpus.contracts.size());
    parallel_for(corpus.contracts.size(), jobs,
                 [&](std::size_t i) { cache.contracts[i] = analyze_contract(corpus.contracts[i], cfg, diag); });
    std::stable_sort(cache.contracts.begin(), cache.contracts.end(),
                     [](const CachedContract& a, const CachedContract& b) { return a.id < b.id; });
    const auto fragments = cache.all_fragments();
    cache.pairs = detect_pairs(fragments, cfg, jobs);
    return cache;
}

CorpusDelta diff_against_cache(const AnalysisCache& cache, const Corpus& current) {
    std::map<std::string, std::string> cached;
    for (const auto& c : cache.contracts) cached.emplace(c.id, c.digest);
    CorpusDelta delta;
    delta.changed.label = current.label;
    std::set<std::string> present;
    for (const auto& c : current.contracts) {
        present.insert(c.id);
        const auto it = cached.find(c.id);
        if (it == cached.end() || it->second != c.content_digest) delta.changed.contracts.push_back(c);
    }
    for (const auto& [id, digest] : cached) {
        if (!present.contains(id)) delta.removed.push_back(id);
    }
    return delta;
}

IncrementalResult incremental_scan(const AnalysisCache& cache, const CorpusDelta& delta, const CloneConfig& cfg,
                                   unsigned jobs, Diagnostics* diag) {
    cfg.validate();
    if (cache.config_digest != cfg.digest()) {
        throw Error(ErrorCode::kCacheConfigMismatch, "analysis cache was built with a different configuration");
    }

    std::map<std::string, const CachedContract*> cached_by_id;
    for (const auto& c : cache.contracts) cached_by_id.emplace(c.id, &c);

    std::set<std::string> dropped{delta.removed.begin(), delta.removed.end()};
    std::vector<const SourceContract*> to_analyze;
    for (const auto& c : delta.changed.contracts) {
        const auto it = cached_by_id.find(c.id);
        if (it != cached_by_id.end() && it->second->digest == c.content_digest) continue;
        dropped.insert(c.id);
        to_analyze.push_back(&c);
    }

    IncrementalResult out;
    AnalysisCache& next = out.cache;
    next.config = cache.config;
    next.config_digest = cache.config_digest;
    for (const auto& c : cache.contracts) {
        if (!dropped.contains(c.id)) next.contracts.push_back(c);
    }
    const auto kept_fragments = next.all_fragments();

    std::vector<CachedContract> fresh(to_analyze.size());
    parallel_for(to_analyze.size(), jobs,
                 [&](std::size_t i) { fresh[i] = analyze_contract(*to_analyze[i], cfg, diag); });
    out.renormalized_contracts = fresh.size();
    std::vector<NormalizedFragment> fresh_fragments;
    for (const auto& c : fresh) fresh_fragments.insert(fresh_fragments.end(), c.fragments.begin(), c.fragments.end());

    for (const auto& p : cache.pairs) {
        if (!dropped.contains(p.left.contract_id) && !dropped.contains(p.right.contract_id)) next.pairs.push_back(p);
    }
    auto fresh_pairs = detect_pairs(fresh_fragments, cfg, jobs);
    next.pairs.insert(next.pairs.end(), fresh_pairs.begin(), fresh_pairs.end());
    auto mixed = cross_pairs(fresh_fragments, kept_fragments, cfg, jobs);
    next.pairs.insert(next.pairs.end(), mixed.begin(), mixed.end());
    std::sort(next.pairs.begin(), next.pairs.end(), canonical_less);

    std::move(fresh.begin(), fresh.end(), std::back_inserter(next.contracts));
    std::stable_sort(next.contracts.begin(), next.contracts.end(),
                     [](const CachedContract& a, const CachedContract& b) { return a.id < b.id; });

    out.result = next.result();
    return out;
}

json clones_report(const AnalysisCache& cache) {
    std::map<FragmentKey, const NormalizedFragment*> by_key;
    for (const auto& c : cache.contracts) {
        for (const auto& f : c.fragments) by_key.emplace(f.origin.key(), &f);
    }
    const auto result = cache.result();

    auto pairs = json::array();
    for (const auto& p : result.pairs) {
        pairs.push_back({{"left", to_json(p.left)}, {"right", to_json(p.right)}, {"similarity", p.similarity}});
    }
    auto classes = json::array();
    for (const auto& cls : result.classes) {
        const auto* exemplar = by_key.at(cls.members.front().key());
        auto members = json::array();
        for (const auto& m : cls.members) {
            const auto* f = by_key.at(m.key());
            members.push_back({{"contract_id", m.contract_id},
                               {"name", m.name},
                               {"start_line", m.start_line},
                               {"end_line", m.end_line},
                               {"similarity_to_exemplar", similarity(exemplar->line_digests, f->line_digests)}});
        }
        classes.push_back({{"class_id", cls.class_id}, {"members", std::move(members)}});
    }
    return {{"config", to_json(cache.config)}, {"pairs", std::move(pairs)}, {"classes", std::move(classes)}};
}

}  // namespace volcano
