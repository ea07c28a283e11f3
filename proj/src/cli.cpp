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


#include <volcano/cli.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include <volcano/analysis_cache.hpp>
#include <volcano/corpus.hpp>
#include <volcano/detector.hpp>
#include <volcano/error.hpp>
#include <volcano/extractor.hpp>
#include <volcano/fetcher.hpp>
#include <volcano/parallel.hpp>
#include <volcano/signatures.hpp>

namespace volcano::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::string_view kCacheDirName = ".volcano-cache";

const RunConfig kDefaults{};

std::string number_text(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct Builder {
    CLI::App app{"Near-miss clone based vulnerability detection for Solidity contracts", "volcano"};
    RunConfig cfg;
    std::string mode_text{"consistent"};
    std::size_t max_lines{0};
    bool no_cache{false};
    bool no_timing{false};
    bool dump{false};

    Builder() {
        app.require_subcommand(1);
        app.set_help_all_flag("--help-all", "Print help for every subcommand");

        auto* fetch = app.add_subcommand("fetch", "Download verified contract source from a block explorer");
        fetch->add_option("--address", cfg.addresses, "Contract address (0x + 40 hex digits), repeatable");
        fetch->add_option("--addresses-file", cfg.addresses_file, "File with one address per line");
        fetch->add_option("--out", cfg.out, "Corpus directory receiving <address>.sol files")->required();
        fetch->add_option("--explorer-url", cfg.explorer_url, "Explorer API endpoint");
        fetch->add_option("--rate", cfg.rate, "Request budget per second")->check(CLI::PositiveNumber);

        auto* extract = app.add_subcommand("extract", "List the functions of a corpus");
        corpus_options(extract, true);
        output_options(extract);
        extract->add_option("--manifest", cfg.manifest, "Also write the corpus manifest here");
        extract->add_flag("--dump", dump, "Emit the fragment list as JSON");

        auto* normalize = app.add_subcommand("normalize", "Print normalized functions");
        corpus_options(normalize, true);
        output_options(normalize);
        mode_option(normalize);
        size_options(normalize);

        auto* clones = app.add_subcommand("clones", "Within-corpus clone detection");
        corpus_options(clones, true);
        clones->add_option("--out", cfg.out, "Report path, standard output if omitted");
        clone_options(clones);
        clones->add_option("--cache-dir", cfg.cache_dir, "Analysis cache directory");
        clones->add_flag("--no-cache", no_cache, "Analyze from scratch and leave the cache untouched");
        clones->add_option("--manifest", cfg.manifest, "Also write the corpus manifest here");
        jobs_option(clones);

        auto* derive = app.add_subcommand("derive", "Derive signatures from a labeled vulnerability corpus");
        corpus_options(derive, true);
        derive->add_option("--labels", cfg.labels, "CSV with contract_id,vuln_type rows")->required();
        derive->add_option("--out", cfg.out, "Signature directory to write")->required();
        derive->add_option("--review", cfg.review, "Mixed-label classes, default <out>/review.json");
        clone_options(derive);
        jobs_option(derive);

        auto* scan = app.add_subcommand("scan", "Match a target corpus against vulnerability signatures");
        corpus_options(scan, true);
        scan->add_option("--sigs", cfg.sigs, "Signature file or directory, built-in set if omitted");
        output_options(scan);
        scan->add_option("--catalog", cfg.catalog, "Also write the detection catalog CSV here");
        clone_options(scan);
        scan->add_flag("--no-timing", no_timing, "Leave timing out of the report");
        scan->add_option("--manifest", cfg.manifest, "Also write the corpus manifest here");
        jobs_option(scan);

        auto* evolve = app.add_subcommand("evolve", "Per Solidity version analysis");
        corpus_options(evolve, true);
        evolve->add_option("--sigs", cfg.sigs, "Signature file or directory, built-in set if omitted");
        output_options(evolve);
        evolve->add_option("--cell", cfg.cells, "Setting <mode>:<percent>, repeatable; default blind:0 consistent:30");
        evolve->add_option("--min-lines", cfg.min_lines, "Smallest function considered")->check(CLI::PositiveNumber);
        jobs_option(evolve);

        auto* cache = app.add_subcommand("cache", "Manage the analysis cache");
        cache->require_subcommand(1);
        auto* clear = cache->add_subcommand("clear", "Delete the analysis cache");
        corpus_options(clear, false);
        clear->add_option("--cache-dir", cfg.cache_dir, "Analysis cache directory");
    }

    void corpus_options(CLI::App* sub, bool required) {
        auto* in = sub->add_option("--in", cfg.in, "Corpus directory or single .sol file");
        if (required) {
            in->required();
            sub->add_flag("--dedupe", cfg.dedupe, "Drop contracts whose content repeats");
        }
    }

    void output_options(CLI::App* sub) {
        sub->add_option("--out", cfg.out, "Output path, standard output if omitted");
        sub->add_option("--format", cfg.format, "json, csv or text; default from the --out extension")
            ->check(CLI::IsMember({"json", "csv", "text"}));
    }

    void mode_option(CLI::App* sub) {
        sub->add_option("--mode", mode_text, "Identifier renaming: none, blind or consistent")
            ->check(CLI::IsMember({"none", "blind", "consistent"}));
    }

    void size_options(CLI::App* sub) {
        sub->add_option("--min-lines", cfg.min_lines, "Smallest function considered, in normalized lines")
            ->check(CLI::PositiveNumber);
        sub->add_option("--max-lines", max_lines, "Largest function considered")->check(CLI::PositiveNumber);
    }

    void clone_options(CLI::App* sub) {
        mode_option(sub);
        sub->add_option("--threshold", cfg.threshold_percent, "Maximum difference in whole percent (0-30)")
            ->check(CLI::Range(0, 30));
        size_options(sub);
    }

    void jobs_option(CLI::App* sub) {
        sub->add_option("--jobs", cfg.jobs, "Worker threads, 0 for all cores");
    }

    RunConfig finish() {
        auto* sub = app.get_subcommands().front();
        cfg.subcommand = sub->get_name();
        if (cfg.subcommand == "cache") cfg.subcommand += " " + sub->get_subcommands().front()->get_name();
        cfg.mode = *parse_renaming_mode(mode_text);
        if (max_lines > 0) cfg.max_lines = max_lines;
        cfg.use_cache = !no_cache;
        cfg.timing = !no_timing;
        if (dump) cfg.format = "json";
        return cfg;
    }

    [[nodiscard]] std::string grammar() const {
        const CLI::App* target = &app;
        while (!target->get_subcommands().empty()) target = target->get_subcommands().front();
        return target->help();
    }
};

bool usage_error(ErrorCode code) {
    return code == ErrorCode::kInvalidConfig || code == ErrorCode::kInvalidAddress;
}

void write_output(const std::string& path, std::string_view text, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    const fs::path p{path};
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream file{p, std::ios::binary | std::ios::trunc};
    if (!file) throw Error(ErrorCode::kIo, "cannot write " + path);
    file << text;
    if (!file) throw Error(ErrorCode::kIo, "cannot write " + path);
}

std::string resolved_format(const RunConfig& cfg, std::string_view fallback = "json") {
    if (!cfg.format.empty()) return cfg.format;
    const auto ext = fs::path{cfg.out}.extension().string();
    if (ext == ".csv") return "csv";
    if (ext == ".txt") return "text";
    if (ext == ".json") return "json";
    return std::string{fallback};
}

unsigned jobs_of(const RunConfig& cfg) { return cfg.jobs == 0 ? default_jobs() : cfg.jobs; }

Corpus load_input(const RunConfig& cfg, Diagnostics& diag) {
    const fs::path in{cfg.in};
    Corpus corpus;
    if (fs::is_regular_file(in)) {
        std::ifstream file{in, std::ios::binary};
        std::ostringstream buf;
        buf << file.rdbuf();
        corpus.label = in.generic_string();
        corpus.contracts.push_back(SourceContract::from_text(in.filename().generic_string(), buf.str(), in));
    } else {
        corpus = load_corpus(in, in.generic_string(), &diag);
    }
    if (cfg.dedupe) corpus = dedupe(corpus);
    if (!cfg.manifest.empty()) write_output(cfg.manifest, corpus_manifest(corpus).dump(2) + "\n", std::cout);
    return corpus;
}

SignatureSet load_sigs(const RunConfig& cfg) {
    if (cfg.sigs.empty() || cfg.sigs == "builtin") return builtin_signatures();
    return load_signatures(cfg.sigs);
}

fs::path cache_root(const RunConfig& cfg) {
    if (!cfg.cache_dir.empty()) return cfg.cache_dir;
    const fs::path in{cfg.in.empty() ? "." : cfg.in};
    return (fs::is_regular_file(in) ? in.parent_path() : in) / kCacheDirName;
}

json config_echo(const RunConfig& cfg, const CloneConfig& clone_cfg) {
    json echo = to_json(clone_cfg);
    echo["threshold"] = cfg.threshold_percent;
    echo["run"] = to_json(cfg);
    return echo;
}

int do_fetch(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    std::vector<std::string> addresses = cfg.addresses;
    if (!cfg.addresses_file.empty()) {
        std::ifstream file{cfg.addresses_file};
        if (!file) throw Error(ErrorCode::kIo, "cannot read " + cfg.addresses_file);
        std::string line;
        while (std::getline(file, line)) {
            line.erase(std::remove_if(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); }),
                       line.end());
            if (!line.empty() && line.front() != '#') addresses.push_back(line);
        }
    }
    if (addresses.empty()) throw Error(ErrorCode::kInvalidConfig, "fetch needs --address or --addresses-file");
    for (const auto& a : addresses) {
        if (!is_valid_address(a)) throw Error(ErrorCode::kInvalidAddress, "malformed address '" + a + "'");
    }

    FetchOptions options;
    if (!cfg.explorer_url.empty()) options.explorer_url = cfg.explorer_url;
    options.api_key = explorer_key_from_env();
    options.requests_per_second = cfg.rate;
    Fetcher fetcher{options};
    int status = kExitOk;
    for (const auto& a : addresses) {
        try {
            const auto contract = fetcher.fetch(a, cfg.out);
            out << contract.path.generic_string() << ' ' << contract.content_digest << '\n';
        } catch (const Error& e) {
            err << "error: " << a << ": " << to_string(e.code()) << ": " << e.what() << '\n';
            status = kExitFailure;
        }
    }
    return status;
}

int do_extract(const RunConfig& cfg, std::ostream& out, Diagnostics& diag) {
    const Corpus corpus = load_input(cfg, diag);
    const std::string format = resolved_format(cfg);
    json list = json::array();
    std::ostringstream text;
    for (const auto& contract : corpus.contracts) {
        for (const auto& f : extract_functions(contract, &diag)) {
            list.push_back({{"contract_id", f.contract_id},
                            {"name", f.name},
                            {"start_line", f.start_line},
                            {"start_col", f.start_col},
                            {"end_line", f.end_line},
                            {"end_col", f.end_col},
                            {"lines", f.line_count()},
                            {"text", f.text}});
            text << f.contract_id << ',' << f.name << ',' << f.start_line << ',' << f.end_line << '\n';
        }
    }
    if (format == "json") {
        write_output(cfg.out, list.dump(2) + "\n", out);
    } else {
        write_output(cfg.out, (format == "csv" ? "contract_id,function,start_line,end_line\n" : "") + text.str(), out);
    }
    return kExitOk;
}

int do_normalize(const RunConfig& cfg, std::ostream& out, Diagnostics& diag) {
    const Corpus corpus = load_input(cfg, diag);
    CloneConfig size_cfg = CloneConfig::make(cfg.mode, 0.0, cfg.min_lines, cfg.max_lines);
    json list = json::array();
    std::ostringstream text;
    for (const auto& contract : corpus.contracts) {
        for (const auto& f : extract_functions(contract, &diag)) {
            const auto nf = normalize(f, cfg.mode);
            if (!size_cfg.admits(nf.size())) continue;
            list.push_back({{"contract_id", nf.origin.contract_id},
                            {"name", nf.origin.name},
                            {"start_line", nf.origin.start_line},
                            {"end_line", nf.origin.end_line},
                            {"mode", to_string(nf.mode)},
                            {"lines", nf.lines}});
            text << "# " << nf.origin.contract_id << ':' << nf.origin.start_line << ' ' << nf.origin.name << '\n';
            for (const auto& line : nf.lines) text << line << '\n';
        }
    }
    if (resolved_format(cfg) == "json") {
        write_output(cfg.out, list.dump(2) + "\n", out);
    } else {
        write_output(cfg.out, text.str(), out);
    }
    return kExitOk;
}

int do_clones(const RunConfig& cfg, std::ostream& out, Diagnostics& diag) {
    const CloneConfig clone_cfg = cfg.clone_config();
    const Corpus corpus = load_input(cfg, diag);
    const fs::path dir = cache_root(cfg) / ("clones-" + clone_cfg.digest().substr(0, 16));

    std::optional<AnalysisCache> cached;
    if (cfg.use_cache) cached = AnalysisCache::load(dir, &diag);
    AnalysisCache current;
    if (cached && cached->config == clone_cfg) {
        current = incremental_scan(*cached, diff_against_cache(*cached, corpus), clone_cfg, jobs_of(cfg), &diag).cache;
    } else {
        current = full_scan(corpus, clone_cfg, jobs_of(cfg), &diag);
    }
    if (cfg.use_cache) current.save(dir);

    json report = clones_report(current);
    report["config"] = config_echo(cfg, clone_cfg);
    write_output(cfg.out, report.dump(2) + "\n", out);
    return kExitOk;
}

int do_derive(const RunConfig& cfg, std::ostream& out, Diagnostics& diag) {
    const CloneConfig clone_cfg = cfg.clone_config();
    const auto labels = load_labels_csv(cfg.labels);
    const Corpus corpus = load_input(cfg, diag);
    const auto derived = derive_signatures(corpus, labels, clone_cfg, jobs_of(cfg), &diag);
    save_signatures(derived.set, cfg.out);
    const std::string review = cfg.review.empty() ? (fs::path{cfg.out} / "review.json").string() : cfg.review;
    write_output(review, review_json(derived.review).dump(2) + "\n", out);
    out << "derived " << derived.set.size() << " signatures, " << derived.review.size()
        << " mixed-label classes for review\n";
    return kExitOk;
}

int do_scan(const RunConfig& cfg, std::ostream& out, std::ostream& err, Diagnostics& diag) {
    const CloneConfig clone_cfg = cfg.clone_config();
    const SignatureSet sigs = load_sigs(cfg);
    const Corpus corpus = load_input(cfg, diag);
    const ScanReport report = scan(corpus, sigs, clone_cfg, jobs_of(cfg), &diag);

    const std::string format = resolved_format(cfg);
    if (format == "csv") {
        write_output(cfg.out, catalog_csv(report), out);
    } else if (format == "text") {
        write_output(cfg.out, report_text(report, cfg.timing), out);
    } else {
        json j = report_json(report, cfg.timing);
        j["config"] = config_echo(cfg, clone_cfg);
        write_output(cfg.out, j.dump(2) + "\n", out);
    }
    if (!cfg.catalog.empty()) write_output(cfg.catalog, catalog_csv(report), out);
    if (cfg.timing && format != "text") err << "timing: " << emit_timing(report.timing).text << '\n';
    return kExitOk;
}

std::vector<EvolutionCellConfig> parse_cells(const std::vector<std::string>& cells) {
    if (cells.empty()) return default_evolution_cells();
    std::vector<EvolutionCellConfig> out;
    for (const auto& c : cells) {
        const auto colon = c.find(':');
        const auto mode = parse_renaming_mode(c.substr(0, colon));
        int percent = -1;
        if (colon != std::string::npos) {
            try {
                std::size_t used = 0;
                percent = std::stoi(c.substr(colon + 1), &used);
                if (used != c.size() - colon - 1) percent = -1;
            } catch (const std::exception&) {
                percent = -1;
            }
        }
        if (!mode || percent < 0 || percent > 30) {
            throw Error(ErrorCode::kInvalidConfig, "--cell expects <none|blind|consistent>:<0-30>, got '" + c + "'");
        }
        out.push_back({*mode, percent});
    }
    return out;
}

int do_evolve(const RunConfig& cfg, std::ostream& out, Diagnostics& diag) {
    const auto settings = parse_cells(cfg.cells);
    const SignatureSet sigs = load_sigs(cfg);
    const Corpus corpus = load_input(cfg, diag);
    const auto report = analyze_evolution(sort_by_version(corpus), sigs, settings, cfg.min_lines, jobs_of(cfg), &diag);
    if (resolved_format(cfg, "csv") == "json") {
        write_output(cfg.out, evolution_json(report).dump(2) + "\n", out);
    } else {
        write_output(cfg.out, evolution_csv(report), out);
    }
    return kExitOk;
}

int do_cache_clear(const RunConfig& cfg, std::ostream& out) {
    const fs::path dir = cache_root(cfg);
    if (!fs::exists(dir)) {
        out << "no cache at " << dir.generic_string() << '\n';
        return kExitOk;
    }
    for (const auto& entry : fs::directory_iterator(dir)) {
        const auto name = entry.path().filename().string();
        const bool ours = entry.is_directory() && (name.starts_with("clones-") || name == "objects");
        if (!ours && name != "index.json") {
            throw Error(ErrorCode::kIo, dir.generic_string() + " does not look like a volcano cache; not removing");
        }
    }
    const auto removed = fs::remove_all(dir);
    out << "removed " << dir.generic_string() << " (" << removed << " entries)\n";
    return kExitOk;
}

}  // namespace

CloneConfig RunConfig::clone_config() const {
    return CloneConfig::from_percent(mode, threshold_percent, min_lines, max_lines);
}

ParseResult parse_run_config(const std::vector<std::string>& args) {
    Builder b;
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        b.app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        return {std::nullopt, kExitOk, b.grammar()};
    } catch (const CLI::CallForAllHelp&) {
        return {std::nullopt, kExitOk, b.app.help("", CLI::AppFormatMode::All)};
    } catch (const CLI::ParseError& e) {
        return {std::nullopt, kExitUsage, "error: " + std::string{e.what()} + "\n\n" + b.grammar()};
    }
    return {b.finish(), kExitOk, {}};
}

std::vector<std::string> to_argv(const RunConfig& cfg) {
    std::vector<std::string> argv;
    std::istringstream words{cfg.subcommand};
    for (std::string w; words >> w;) argv.push_back(w);
    const auto text = [&](std::string_view flag, const std::string& value, const std::string& def) {
        if (value != def) {
            argv.emplace_back(flag);
            argv.push_back(value);
        }
    };
    text("--in", cfg.in, kDefaults.in);
    text("--out", cfg.out, kDefaults.out);
    text("--sigs", cfg.sigs, kDefaults.sigs);
    text("--labels", cfg.labels, kDefaults.labels);
    text("--review", cfg.review, kDefaults.review);
    text("--cache-dir", cfg.cache_dir, kDefaults.cache_dir);
    text("--catalog", cfg.catalog, kDefaults.catalog);
    text("--manifest", cfg.manifest, kDefaults.manifest);
    text("--explorer-url", cfg.explorer_url, kDefaults.explorer_url);
    text("--addresses-file", cfg.addresses_file, kDefaults.addresses_file);
    for (const auto& a : cfg.addresses) {
        argv.emplace_back("--address");
        argv.push_back(a);
    }
    text("--mode", std::string{to_string(cfg.mode)}, std::string{to_string(kDefaults.mode)});
    text("--threshold", std::to_string(cfg.threshold_percent), std::to_string(kDefaults.threshold_percent));
    text("--min-lines", std::to_string(cfg.min_lines), std::to_string(kDefaults.min_lines));
    if (cfg.max_lines) text("--max-lines", std::to_string(*cfg.max_lines), "");
    if (!cfg.use_cache) argv.emplace_back("--no-cache");
    if (cfg.dedupe) argv.emplace_back("--dedupe");
    if (!cfg.timing) argv.emplace_back("--no-timing");
    text("--format", cfg.format, kDefaults.format);
    text("--jobs", std::to_string(cfg.jobs), std::to_string(kDefaults.jobs));
    for (const auto& c : cfg.cells) {
        argv.emplace_back("--cell");
        argv.push_back(c);
    }
    text("--rate", number_text(cfg.rate), number_text(kDefaults.rate));
    return argv;
}

json to_json(const RunConfig& cfg) {
    return {{"subcommand", cfg.subcommand}, {"argv", to_argv(cfg)}};
}

int execute(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    Diagnostics diag;
    int status = kExitOk;
    try {
        if (cfg.subcommand == "fetch") {
            status = do_fetch(cfg, out, err);
        } else if (cfg.subcommand == "extract") {
            status = do_extract(cfg, out, diag);
        } else if (cfg.subcommand == "normalize") {
            status = do_normalize(cfg, out, diag);
        } else if (cfg.subcommand == "clones") {
            status = do_clones(cfg, out, diag);
        } else if (cfg.subcommand == "derive") {
            status = do_derive(cfg, out, diag);
        } else if (cfg.subcommand == "scan") {
            status = do_scan(cfg, out, err, diag);
        } else if (cfg.subcommand == "evolve") {
            status = do_evolve(cfg, out, diag);
        } else if (cfg.subcommand == "cache clear") {
            status = do_cache_clear(cfg, out);
        } else {
            err << "error: unknown subcommand '" << cfg.subcommand << "'\n";
            status = kExitUsage;
        }
    } catch (const Error& e) {
        err << "error: " << to_string(e.code()) << ": " << e.what() << '\n';
        status = usage_error(e.code()) ? kExitUsage : kExitFailure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        status = kExitFailure;
    }
    for (const auto& w : diag.warnings()) err << "warning: " << to_string(w.code) << ": " << w.message << '\n';
    return status;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    const auto parsed = parse_run_config(args);
    if (!parsed.config) {
        (parsed.exit_code == kExitOk ? out : err) << parsed.message;
        return parsed.exit_code;
    }
    return execute(*parsed.config, out, err);
}

}  // namespace volcano::cli
