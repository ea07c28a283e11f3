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


#include <volcano/detector.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include <volcano/analysis_cache.hpp>
#include <volcano/error.hpp>
#include <volcano/parallel.hpp>

namespace volcano {

using nlohmann::json;

namespace {

struct ContractScan {
    std::vector<Detection> detections;
    std::size_t fragments{0};
    double ms{0.0};
};

std::string fraction_text(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string{s};
    std::string out = "\"";
    for (const char c : s) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

json type_counts_json(const TypeCounts& counts) {
    json out = json::object();
    for (const auto t : kAllVulnerabilityTypes) out[std::string{to_string(t)}] = counts.count(t) ? counts.at(t) : 0;
    return out;
}

json types_json(const std::vector<VulnerabilityType>& types) {
    auto out = json::array();
    for (const auto t : types) out.push_back(to_string(t));
    return out;
}

std::vector<CrossClass> build_cross_classes(const std::vector<Detection>& detections, const SignatureSet& sigs) {
    std::vector<ClonePair> edges;
    edges.reserve(detections.size());
    for (const auto& d : detections) {
        const auto& sig = *sigs.find(d.sig_id);
        FragmentRef left = sig.exemplar(d.mode).origin;
        FragmentRef right = d.target;
        if (right.key() < left.key()) std::swap(left, right);
        edges.push_back({std::move(left), std::move(right), d.similarity});
    }

    std::vector<CrossClass> out;
    for (auto& cls : cluster_classes(edges)) {
        CrossClass cc;
        std::set<VulnerabilityType> types;
        for (const auto& m : cls.members) {
            if (m.contract_id.starts_with("sig:")) {
                const auto* sig = sigs.find(std::string_view{m.contract_id}.substr(4));
                if (sig == nullptr) continue;
                cc.sig_ids.push_back(sig->sig_id);
                types.insert(sig->vuln_type);
            } else {
                cc.targets.push_back(m);
            }
        }
        cc.vuln_types.assign(types.begin(), types.end());
        cc.clone_class = std::move(cls);
        out.push_back(std::move(cc));
    }
    return out;
}

}  // namespace

bool canonical_less(const Detection& a, const Detection& b) {
    const auto ka = a.target.key();
    const auto kb = b.target.key();
    if (ka != kb) return ka < kb;
    return a.sig_id < b.sig_id;
}

std::optional<double> ScanTiming::average_ms() const {
    if (per_contract.empty()) return std::nullopt;
    return total_ms / static_cast<double>(per_contract.size());
}

TypeCounts zero_type_counts() {
    TypeCounts out;
    for (const auto t : kAllVulnerabilityTypes) out[t] = 0;
    return out;
}

ScanReport scan(const Corpus& target, const SignatureSet& sigs, const CloneConfig& cfg, unsigned jobs,
                Diagnostics* diag) {
    cfg.validate();
    if (sigs.empty()) throw Error(ErrorCode::kEmptySignatureSet, "cannot scan with an empty signature set");

    std::vector<const NormalizedFragment*> exemplars;
    exemplars.reserve(sigs.size());
    for (const auto& s : sigs.signatures) exemplars.push_back(&s.exemplar(cfg.mode));

    std::vector<ContractScan> results(target.contracts.size());
    parallel_for(target.contracts.size(), jobs, [&](std::size_t i) {
        using Clock = std::chrono::steady_clock;
        const auto started = Clock::now();
        const auto& contract = target.contracts[i];
        const CachedContract analyzed = analyze_contract(contract, cfg, diag);
        const std::string bucket = contract.bucket();
        auto& out = results[i];
        out.fragments = analyzed.fragments.size();
        for (const auto& frag : analyzed.fragments) {
            for (std::size_t s = 0; s < exemplars.size(); ++s) {
                const auto& ex = *exemplars[s];
                if (ex.size() == 0 || size_prunable(frag.size(), ex.size(), cfg.max_difference)) continue;
                const std::size_t lcs = lcs_length(frag.line_digests, ex.line_digests);
                if (!within_difference(lcs, frag.size(), ex.size(), cfg.max_difference)) continue;
                const auto& sig = sigs.signatures[s];
                out.detections.push_back({sig.sig_id, sig.vuln_type, frag.origin, frag.size(),
                                          static_cast<double>(lcs) /
                                              static_cast<double>(std::max(frag.size(), ex.size())),
                                          cfg.mode, cfg.max_difference, bucket});
            }
        }
        out.ms = std::chrono::duration<double, std::milli>(Clock::now() - started).count();
    });

    ScanReport report;
    report.config = cfg;
    report.contracts_scanned = target.contracts.size();
    for (std::size_t i = 0; i < results.size(); ++i) {
        auto& r = results[i];
        report.fragments_scanned += r.fragments;
        report.detections.insert(report.detections.end(), std::make_move_iterator(r.detections.begin()),
                                 std::make_move_iterator(r.detections.end()));
        report.timing.per_contract.push_back({target.contracts[i].id, r.ms});
        report.timing.total_ms += r.ms;
    }
    std::sort(report.detections.begin(), report.detections.end(),
              [](const Detection& a, const Detection& b) { return canonical_less(a, b); });
    report.per_type_instances = count_instances(report.detections);
    report.cross_classes = build_cross_classes(report.detections, sigs);
    report.per_type_classes = zero_type_counts();
    for (const auto& cc : report.cross_classes) {
        for (const auto t : cc.vuln_types) ++report.per_type_classes[t];
    }
    return report;
}

TypeCounts count_instances(const std::vector<Detection>& detections) {
    std::set<std::pair<VulnerabilityType, FragmentKey>> seen;
    for (const auto& d : detections) seen.emplace(d.vuln_type, d.target.key());
    TypeCounts out = zero_type_counts();
    for (const auto& [type, key] : seen) ++out[type];
    return out;
}

TypeCounts count_instances(const ScanReport& report) { return count_instances(report.detections); }

json report_json(const ScanReport& report, bool include_timing) {
    auto detections = json::array();
    for (const auto& d : report.detections) {
        detections.push_back({{"sig_id", d.sig_id},
                              {"vuln_type", to_string(d.vuln_type)},
                              {"contract_id", d.target.contract_id},
                              {"function", d.target.name},
                              {"start_line", d.target.start_line},
                              {"end_line", d.target.end_line},
                              {"similarity", d.similarity}});
    }
    auto classes = json::array();
    for (const auto& cc : report.cross_classes) {
        auto members = json::array();
        for (const auto& m : cc.clone_class.members) {
            members.push_back({{"contract_id", m.contract_id},
                               {"name", m.name},
                               {"start_line", m.start_line},
                               {"end_line", m.end_line}});
        }
        classes.push_back({{"class_id", cc.clone_class.class_id},
                           {"vuln_types", types_json(cc.vuln_types)},
                           {"sig_ids", cc.sig_ids},
                           {"members", std::move(members)}});
    }
    json out = {{"config", to_json(report.config)},
                {"contracts_scanned", report.contracts_scanned},
                {"fragments_scanned", report.fragments_scanned},
                {"detections", std::move(detections)},
                {"per_type_instances", type_counts_json(report.per_type_instances)},
                {"per_type_classes", type_counts_json(report.per_type_classes)},
                {"classes", std::move(classes)}};
    if (include_timing) out["timing"] = emit_timing(report.timing).json;
    return out;
}

std::string catalog_csv(const ScanReport& report) {
    std::ostringstream out;
    out << "contract_id,vuln_type,sig_id,function,lines,similarity,solidity_bucket\n";
    for (const auto& d : report.detections) {
        out << csv_field(d.target.contract_id) << ',' << to_string(d.vuln_type) << ',' << csv_field(d.sig_id) << ','
            << csv_field(d.target.name) << ',' << d.target.start_line << '-' << d.target.end_line << ','
            << fraction_text(d.similarity) << ',' << csv_field(d.solidity_bucket) << '\n';
    }
    return std::move(out).str();
}

std::string report_text(const ScanReport& report, bool include_timing) {
    std::ostringstream out;
    out << "mode " << to_string(report.config.mode) << ", threshold " << to_percent(report.config.max_difference)
        << "%, " << report.contracts_scanned << " contracts, " << report.fragments_scanned << " functions\n";
    for (const auto& d : report.detections) {
        out << d.target.contract_id << ':' << d.target.start_line << '-' << d.target.end_line << ' '
            << d.target.name << ' ' << to_string(d.vuln_type) << ' ' << d.sig_id << ' ' << to_percent(d.similarity)
            << "%\n";
    }
    out << "instances:";
    for (const auto& [type, n] : report.per_type_instances) out << ' ' << to_string(type) << '=' << n;
    out << "\nclasses: " << report.cross_classes.size() << '\n';
    if (include_timing) out << "timing: " << emit_timing(report.timing).text << '\n';
    return std::move(out).str();
}

std::string format_hms(double ms) {
    const auto total = static_cast<long long>(std::floor(std::max(0.0, ms) / 1000.0));
    const long long days = total / 86400;
    const long long rest = total % 86400;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%02lld:%02lld:%02lld", rest / 3600, (rest / 60) % 60, rest % 60);
    if (days == 0) return buf;
    return std::to_string(days) + (days == 1 ? " day, " : " days, ") + buf;
}

TimingSummary emit_timing(const ScanTiming& timing) {
    TimingSummary out;
    const auto average = timing.average_ms();
    auto per_contract = json::array();
    for (const auto& t : timing.per_contract) per_contract.push_back(t.ms);
    out.json = {{"per_contract_ms", std::move(per_contract)},
                {"total_ms", timing.total_ms},
                {"average_ms", average ? json(*average) : json(nullptr)},
                {"total", format_hms(timing.total_ms)},
                {"average", average ? json(format_hms(*average)) : json("NA")}};
    if (average) {
        out.text = "average " + format_hms(*average) + " (" + std::to_string(std::llround(*average)) +
                   "ms), total " + format_hms(timing.total_ms);
    } else {
        out.text = "average NA, total " + format_hms(timing.total_ms);
    }
    return out;
}

std::vector<EvolutionCellConfig> default_evolution_cells() {
    return {{RenamingMode::kBlind, 0}, {RenamingMode::kConsistent, 30}};
}

const EvolutionCell* EvolutionReport::find(std::string_view bucket, VulnerabilityType type,
                                           const EvolutionCellConfig& setting) const {
    for (const auto& c : cells) {
        if (c.bucket == bucket && c.vuln_type == type && c.setting == setting) return &c;
    }
    return nullptr;
}

int to_percent(double similarity) { return static_cast<int>(std::lround(similarity * 100.0)); }

EvolutionReport analyze_evolution(const VersionBuckets& buckets, const SignatureSet& sigs,
                                  const std::vector<EvolutionCellConfig>& settings, std::size_t min_lines,
                                  unsigned jobs, Diagnostics* diag) {
    EvolutionReport report;
    report.settings = settings;
    Corpus all;
    all.label = "all buckets";
    std::map<std::string, std::string> bucket_of;
    for (const auto& [bucket, corpus] : buckets) {
        report.buckets.push_back(bucket);
        for (const auto& c : corpus.contracts) {
            bucket_of[c.id] = bucket;
            all.contracts.push_back(c);
        }
    }

    for (const auto& setting : settings) {
        const auto cfg = CloneConfig::from_percent(setting.mode, setting.threshold_percent, min_lines);
        for (const auto& [bucket, corpus] : buckets) {
            const ScanReport r = scan(corpus, sigs, cfg, jobs, diag);
            for (const auto type : kAllVulnerabilityTypes) {
                EvolutionCell cell;
                cell.bucket = bucket;
                cell.vuln_type = type;
                cell.setting = setting;
                cell.class_count = r.per_type_classes.at(type);
                std::optional<double> lowest;
                for (const auto& d : r.detections) {
                    if (d.vuln_type != type) continue;
                    ++cell.detection_count;
                    lowest = lowest ? std::min(*lowest, d.similarity) : d.similarity;
                }
                if (lowest) cell.min_similarity_percent = to_percent(*lowest);
                report.cells.push_back(cell);
            }
        }

        const ScanReport whole = scan(all, sigs, cfg, jobs, nullptr);
        report.unsorted_class_counts.emplace_back(setting, whole.per_type_classes);
        for (const auto& cc : whole.cross_classes) {
            std::set<std::string> spanned;
            for (const auto& t : cc.targets) spanned.insert(bucket_of.at(t.contract_id));
            if (spanned.size() < 2) continue;
            std::vector<std::string> ordered;
            for (const auto& b : report.buckets) {
                if (spanned.contains(b)) ordered.push_back(b);
            }
            report.cross_bucket_classes.push_back({setting, cc.clone_class.class_id, cc.vuln_types, ordered});
        }
    }

    // Cells ordered by bucket first; buckets are already in version order.
    std::stable_sort(report.cells.begin(), report.cells.end(), [&](const EvolutionCell& a, const EvolutionCell& b) {
        const auto pa = std::find(report.buckets.begin(), report.buckets.end(), a.bucket);
        const auto pb = std::find(report.buckets.begin(), report.buckets.end(), b.bucket);
        return pa < pb;
    });
    return report;
}

std::string evolution_csv(const EvolutionReport& report) {
    std::ostringstream out;
    out << "vuln_type,bucket,mode,threshold,class_count,min_similarity\n";
    for (const auto type : kAllVulnerabilityTypes) {
        for (const auto& setting : report.settings) {
            for (const auto& bucket : report.buckets) {
                const auto* cell = report.find(bucket, type, setting);
                out << to_string(type) << ',' << csv_field(bucket) << ',' << to_string(setting.mode) << ','
                    << setting.threshold_percent << ',' << cell->class_count << ',';
                if (cell->min_similarity_percent) {
                    out << *cell->min_similarity_percent << '%';
                } else {
                    out << "NA";
                }
                out << '\n';
            }
        }
    }
    return std::move(out).str();
}

json evolution_json(const EvolutionReport& report) {
    auto cells = json::array();
    for (const auto& c : report.cells) {
        cells.push_back({{"bucket", c.bucket},
                         {"vuln_type", to_string(c.vuln_type)},
                         {"mode", to_string(c.setting.mode)},
                         {"threshold", c.setting.threshold_percent},
                         {"class_count", c.class_count},
                         {"detections", c.detection_count},
                         {"min_similarity", c.min_similarity_percent ? json(*c.min_similarity_percent) : json("NA")}});
    }
    auto unsorted = json::array();
    for (const auto& [setting, counts] : report.unsorted_class_counts) {
        unsorted.push_back({{"mode", to_string(setting.mode)},
                            {"threshold", setting.threshold_percent},
                            {"class_counts", type_counts_json(counts)}});
    }
    auto spanning = json::array();
    for (const auto& c : report.cross_bucket_classes) {
        spanning.push_back({{"mode", to_string(c.setting.mode)},
                            {"threshold", c.setting.threshold_percent},
                            {"class_id", c.class_id},
                            {"vuln_types", types_json(c.vuln_types)},
                            {"buckets", c.buckets}});
    }
    return {{"buckets", report.buckets},
            {"cells", std::move(cells)},
            {"unsorted_class_counts", std::move(unsorted)},
            {"cross_bucket_classes", std::move(spanning)}};
}

}  // namespace volcano
