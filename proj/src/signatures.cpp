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

#include <volcano/signatures.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include <volcano/analysis_cache.hpp>
#include <volcano/error.hpp>
#include <volcano/extractor.hpp>

namespace volcano {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string read_text(const fs::path& path) {
    std::ifstream in{path, std::ios::binary};
    if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return std::move(buf).str();
}

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string{s.substr(first, last - first + 1)};
}

std::string upper(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return s;
}

std::string file_safe(std::string_view id) {
    std::string out;
    for (const char c : id) {
        out.push_back(std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '-' || c == '_' || c == '.' ? c : '_');
    }
    return out;
}

NormalizedFragment relabel(NormalizedFragment nf, const std::string& sig_id, const FunctionFragment& source) {
    nf.origin = {"sig:" + sig_id, source.name, source.start_line, source.start_col, source.end_line};
    return nf;
}

struct Annotation {
    VulnerabilityType type;
    std::optional<std::string> sig_id;
};

Annotation find_annotation(const std::vector<std::string>& lines, const FunctionFragment& f,
                           std::string_view file_id) {
    static const std::regex kAnnotation{R"(^\s*//\s*@volcano:vuln=(\S*)(?:\s+sig=(\S+))?.*$)"};
    const std::string where = std::string{file_id} + ":" + std::to_string(f.start_line) + " (" + f.name + ")";
    for (int i = f.start_line - 2; i >= 0; --i) {
        const auto& line = lines[static_cast<std::size_t>(i)];
        if (trim(line).empty()) continue;
        std::smatch m;
        if (!std::regex_match(line, m, kAnnotation)) break;
        const auto type = parse_vulnerability_type(upper(m[1].str()));
        if (!type) throw Error(ErrorCode::kUnknownType, "unknown vulnerability type '" + m[1].str() + "' at " + where);
        Annotation a{*type, std::nullopt};
        if (m[2].matched) a.sig_id = m[2].str();
        return a;
    }
    throw Error(ErrorCode::kMissingAnnotation, "signature function lacks a @volcano:vuln annotation at " + where);
}

}  // namespace

std::string_view to_string(VulnerabilityType type) {
    switch (type) {
        case VulnerabilityType::kReentrancy: return "REENTRANCY";
        case VulnerabilityType::kDos: return "DOS";
        case VulnerabilityType::kIntegerUo: return "INTEGER_UO";
        case VulnerabilityType::kCallToUnknown: return "CALL_TO_UNKNOWN";
        case VulnerabilityType::kOutOfGas: return "OUT_OF_GAS";
        case VulnerabilityType::kMishandledExceptions: return "MISHANDLED_EXCEPTIONS";
        case VulnerabilityType::kMismatchedTypecasting: return "MISMATCHED_TYPECASTING";
        case VulnerabilityType::kWeakModifiers: return "WEAK_MODIFIERS";
    }
    return "REENTRANCY";
}

std::optional<VulnerabilityType> parse_vulnerability_type(std::string_view text) {
    for (const auto t : kAllVulnerabilityTypes) {
        if (to_string(t) == text) return t;
    }
    return std::nullopt;
}

const NormalizedFragment& VulnSignature::exemplar(RenamingMode mode) const {
    switch (mode) {
        case RenamingMode::kNone: return none;
        case RenamingMode::kBlind: return blind;
        case RenamingMode::kConsistent: return consistent;
    }
    return none;
}

VulnSignature make_signature(std::string sig_id, VulnerabilityType type, FunctionFragment source,
                             std::string provenance, std::optional<std::string> origin_class) {
    VulnSignature sig;
    sig.none = relabel(pretty_print(source), sig_id, source);
    if (sig.none.size() < kMinSignatureLines) {
        throw Error(ErrorCode::kInvalidConfig, "signature " + sig_id + " normalizes to fewer than " +
                                                   std::to_string(kMinSignatureLines) + " lines");
    }
    sig.blind = relabel(rename_blind(pretty_print(source)), sig_id, source);
    sig.consistent = relabel(rename_consistent(pretty_print(source)), sig_id, source);
    sig.sig_id = std::move(sig_id);
    sig.vuln_type = type;
    sig.source = std::move(source);
    sig.provenance = std::move(provenance);
    sig.origin_class = std::move(origin_class);
    return sig;
}

void SignatureSet::add(VulnSignature sig) {
    if (find(sig.sig_id) != nullptr) throw Error(ErrorCode::kInvalidConfig, "duplicate signature id " + sig.sig_id);
    signatures.push_back(std::move(sig));
}

const VulnSignature* SignatureSet::find(std::string_view sig_id) const {
    for (const auto& s : signatures) {
        if (s.sig_id == sig_id) return &s;
    }
    return nullptr;
}

bool equivalent(const SignatureSet& a, const SignatureSet& b) {
    if (a.size() != b.size()) return false;
    for (const auto& sa : a.signatures) {
        const auto* sb = b.find(sa.sig_id);
        if (sb == nullptr) return false;
        if (sa.vuln_type != sb->vuln_type || sa.provenance != sb->provenance || sa.origin_class != sb->origin_class ||
            sa.placeholder != sb->placeholder || sa.none.lines != sb->none.lines ||
            sa.blind.lines != sb->blind.lines || sa.consistent.lines != sb->consistent.lines) {
            return false;
        }
    }
    return true;
}

SignatureSet parse_signature_source(std::string_view file_id, std::string_view text) {
    const auto lines = split_lines(text);
    SignatureSet set;
    set.provenance = std::string{file_id};
    std::string stem = fs::path{std::string{file_id}}.stem().string();
    for (auto& fragment : extract_functions(file_id, text)) {
        const auto annotation = find_annotation(lines, fragment, file_id);
        std::string id = annotation.sig_id.value_or(stem + ":" + std::to_string(fragment.start_line));
        set.add(make_signature(std::move(id), annotation.type, std::move(fragment), std::string{file_id}));
    }
    return set;
}

json signature_manifest(const SignatureSet& set) {
    auto entries = json::array();
    for (const auto& s : set.signatures) {
        entries.push_back({{"sig_id", s.sig_id},
                           {"vuln_type", to_string(s.vuln_type)},
                           {"source_file", file_safe(s.sig_id) + ".sol"},
                           {"provenance", s.provenance},
                           {"origin_class", s.origin_class ? json(*s.origin_class) : json(nullptr)},
                           {"placeholder", s.placeholder}});
    }
    return {{"provenance", set.provenance}, {"signatures", std::move(entries)}};
}

void save_signatures(const SignatureSet& set, const fs::path& dir) {
    fs::create_directories(dir);
    for (const auto& s : set.signatures) {
        std::ofstream out{dir / (file_safe(s.sig_id) + ".sol"), std::ios::binary | std::ios::trunc};
        if (!out) throw Error(ErrorCode::kIo, "cannot write signature " + s.sig_id);
        out << "// " << kAnnotationPrefix << to_string(s.vuln_type) << " sig=" << s.sig_id << '\n'
            << s.source.text << '\n';
    }
    std::ofstream manifest{dir / "manifest.json", std::ios::binary | std::ios::trunc};
    if (!manifest) throw Error(ErrorCode::kIo, "cannot write signature manifest");
    manifest << signature_manifest(set).dump(2) << '\n';
}

SignatureSet load_signatures(const fs::path& path) {
    std::error_code ec;
    if (!fs::exists(path, ec)) throw Error(ErrorCode::kMissingRoot, "signature path does not exist: " + path.string());

    std::vector<std::pair<fs::path, std::string>> files;
    fs::path root = path;
    if (fs::is_directory(path)) {
        for (const auto& entry : fs::recursive_directory_iterator(path)) {
            if (entry.is_regular_file() && entry.path().extension() == ".sol") {
                files.emplace_back(entry.path(), fs::relative(entry.path(), path).generic_string());
            }
        }
        std::sort(files.begin(), files.end(), [](const auto& a, const auto& b) { return a.second < b.second; });
    } else {
        root = path.parent_path();
        files.emplace_back(path, path.filename().generic_string());
    }

    std::optional<json> manifest;
    if (fs::exists(root / "manifest.json")) {
        try {
            std::ifstream in{root / "manifest.json"};
            manifest = json::parse(in);
        } catch (const json::exception& e) {
            throw Error(ErrorCode::kIo, "malformed signature manifest: " + std::string{e.what()});
        }
    }

    SignatureSet set;
    set.provenance = manifest ? manifest->value("provenance", path.generic_string()) : path.generic_string();
    for (const auto& [file, id] : files) {
        auto parsed = parse_signature_source(id, read_text(file));
        for (auto& sig : parsed.signatures) {
            if (manifest) {
                for (const auto& entry : manifest->at("signatures")) {
                    if (entry.at("sig_id").get<std::string>() != sig.sig_id) continue;
                    sig.provenance = entry.value("provenance", sig.provenance);
                    if (entry.contains("origin_class") && !entry.at("origin_class").is_null()) {
                        sig.origin_class = entry.at("origin_class").get<std::string>();
                    }
                    sig.placeholder = entry.value("placeholder", false);
                }
            }
            set.add(std::move(sig));
        }
    }
    return set;
}

const std::vector<BuiltinListing>& builtin_listings() {
    static const std::vector<BuiltinListing> kListings = {
        {"call-to-unknown-1", VulnerabilityType::kCallToUnknown, "Call-to-unknown Vulnerability Signature-1",
         "function initialize() public {\n"
         "\tnew_owner = msg.sender;\n"
         "}\n"},
        {"call-to-unknown-2", VulnerabilityType::kCallToUnknown, "Call-to-unknown Vulnerability Signature-2",
         "function() payable {\n"
         "    if (msg.data.length > 0)\n"
         "      owner.delegatecall(msg.data); \n"
         "  }\n"},
        {"dos-1", VulnerabilityType::kDos, "DoS Vulnerability Signature-1",
         "function kill(address malicious) external {\n"
         "    suicide(malicious);\n"
         "    }\n"},
        {"dos-2", VulnerabilityType::kDos, "DoS Vulnerability Signature-2",
         "function kill(address malicious) external {\n"
         "    selfdestruct(malicious);\n"
         "    }\n"},
        {"dos-3", VulnerabilityType::kDos, "DoS Vulnerability Signature-3",
         "function sendPayments() public returns (bool){\n"
         "         for(uint i=0;i<n;i++) {\n"
         "            addresses.send(msg.sender);\n"
         "        }    return true;\n"
         "    }\n"},
        {"dos-4", VulnerabilityType::kDos, "DoS Vulnerability Signature-4",
         "function sendPayments() public returns (bool){\n"
         "         for(uint i=0;i<n;i++) {\n"
         "             require(addresses.send(msg.sender));\n"
         "        }    \n"
         "        return true;\n"
         "    }\n"},
        {"reentrancy-1", VulnerabilityType::kReentrancy, "Re-entrancy Vulnerability Signature",
         "function externalSend(uint amountToSend) {\n"
         "\tif(balance >= amountToSend)\n"
         "\tmsg.sender.call.value(amountToSend)();\n"
         "\tbalance -= amountToSend; //state variable updated after external call function is executed\n"
         "}\n"},
        {"integer-uo-1", VulnerabilityType::kIntegerUo, "Integer Underflow/Overflow Vulnerability Signature",
         "function externalSend(uint amountToSend) {\n"
         "\tif(balance >= amountToSend)\n"
         "\tmsg.sender.call.value(amountToSend)();\n"
         "\tbalance -= amountToSend; //\n"
         "}\n"},
        {"mishandled-exceptions-1", VulnerabilityType::kMishandledExceptions,
         "Mishandled Exceptions Vulnerability Signature",
         "function externalCall(uint str) {\n"
         "\tmsg.sender.delegateCall(str); //without checking for return value\n"
         "}\n"},
        {"weak-modifiers-1", VulnerabilityType::kWeakModifiers, "Weak Access Modifiers Vulnerability Signature",
         "function initialize() public { //weak access modifier for the function initialize\n"
         "\tnew_owner = msg.sender;\n"
         "}\n"},
        {"out-of-gas-1", VulnerabilityType::kOutOfGas, "Out-of-Gas Exception Vulnerability Signature",
         "function externalSend(uint amountToSend) {\n"
         "\tif(balance >= amountToSend)\n"
         "\t msg.sender.send(amountToSend); //gasless-send\n"
         "}\n"},
        {"mismatched-typecasting-placeholder", VulnerabilityType::kMismatchedTypecasting,
         "Placeholder (no published pattern): narrowing cast of a caller-supplied amount",
         "function castAmount(uint256 amount) public {\n"
         "    uint8 small = uint8(amount);\n"
         "    balances[msg.sender] += small;\n"
         "}\n",
         true},
    };
    return kListings;
}

SignatureSet builtin_signatures() {
    SignatureSet set;
    set.provenance = "builtin";
    for (const auto& listing : builtin_listings()) {
        auto fragments = extract_functions("builtin/" + listing.sig_id + ".sol", listing.source);
        std::string provenance = "builtin: " + listing.caption;
        if (listing.sig_id == "integer-uo-1") provenance += " (text duplicates reentrancy-1 as published)";
        if (listing.sig_id == "weak-modifiers-1") provenance += " (code duplicates call-to-unknown-1 as published)";
        auto sig = make_signature(listing.sig_id, listing.type, std::move(fragments.at(0)), std::move(provenance));
        sig.placeholder = listing.placeholder;
        set.add(std::move(sig));
    }
    return set;
}

std::map<std::string, VulnerabilityType> load_labels_csv(const fs::path& path) {
    std::ifstream in{path};
    if (!in) throw Error(ErrorCode::kIo, "cannot read labels file " + path.string());
    std::map<std::string, VulnerabilityType> labels;
    std::string line;
    int row = 0;
    while (std::getline(in, line)) {
        ++row;
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        const auto comma = t.rfind(',');
        if (comma == std::string::npos) {
            throw Error(ErrorCode::kIo, path.string() + ":" + std::to_string(row) + ": expected contract_id,vuln_type");
        }
        const std::string id = trim(std::string_view{t}.substr(0, comma));
        const std::string type_text = upper(trim(std::string_view{t}.substr(comma + 1)));
        if (row == 1 && id == "contract_id") continue;
        const auto type = parse_vulnerability_type(type_text);
        if (!type) {
            throw Error(ErrorCode::kUnknownType,
                        path.string() + ":" + std::to_string(row) + ": unknown vulnerability type '" + type_text + "'");
        }
        labels[id] = *type;
    }
    return labels;
}

DerivedSignatures derive_signatures(const Corpus& vuln_corpus,
                                    const std::map<std::string, VulnerabilityType>& labels, const CloneConfig& cfg,
                                    unsigned jobs, Diagnostics* diag) {
    for (const auto& c : vuln_corpus.contracts) {
        if (!labels.contains(c.id)) throw Error(ErrorCode::kUnlabeledContract, "no label for contract " + c.id);
    }

    const AnalysisCache analysis = full_scan(vuln_corpus, cfg, jobs, diag);
    std::map<FragmentKey, std::size_t> sizes;
    for (const auto& c : analysis.contracts) {
        for (const auto& f : c.fragments) sizes.emplace(f.origin.key(), f.size());
    }
    std::map<std::string, const SourceContract*> contracts;
    for (const auto& c : vuln_corpus.contracts) contracts.emplace(c.id, &c);

    DerivedSignatures out;
    out.set.provenance = "derived from " + vuln_corpus.label;
    for (const auto& cls : cluster_classes(analysis.pairs)) {
        std::set<VulnerabilityType> kinds;
        ReviewEntry entry{cls, {}};
        for (const auto& m : cls.members) {
            const auto type = labels.at(m.contract_id);
            kinds.insert(type);
            entry.member_labels.emplace(m.key().to_string(), type);
        }
        if (kinds.size() != 1) {
            out.review.push_back(std::move(entry));
            continue;
        }

        // Median line count; ties resolved by the smallest fragment key.
        std::vector<std::size_t> counts;
        for (const auto& m : cls.members) counts.push_back(sizes.at(m.key()));
        std::sort(counts.begin(), counts.end());
        const std::size_t median = counts[(counts.size() - 1) / 2];
        const FragmentRef* chosen = nullptr;
        for (const auto& m : cls.members) {
            if (sizes.at(m.key()) == median) {
                chosen = &m;
                break;
            }
        }

        FunctionFragment source;
        for (auto& f : extract_functions(*contracts.at(chosen->contract_id))) {
            if (key_of(f) == chosen->key()) {
                source = std::move(f);
                break;
            }
        }
        const auto type = *kinds.begin();
        std::string type_slug{to_string(type)};
        std::transform(type_slug.begin(), type_slug.end(), type_slug.begin(),
                       [](unsigned char c) { return c == '_' ? '-' : static_cast<char>(std::tolower(c)); });
        out.set.add(make_signature(type_slug + "-" + cls.class_id, type, std::move(source),
                                   "derived: clone class " + cls.class_id + " with " +
                                       std::to_string(cls.members.size()) + " members, exemplar " +
                                       chosen->key().to_string(),
                                   cls.class_id));
    }
    if (out.set.empty()) warn(diag, WarningCode::kEmptySet, "no label-pure clone class found; signature set is empty");
    return out;
}

json review_json(const std::vector<ReviewEntry>& review) {
    auto out = json::array();
    for (const auto& e : review) {
        auto members = json::array();
        for (const auto& m : e.clone_class.members) {
            members.push_back({{"contract_id", m.contract_id},
                               {"name", m.name},
                               {"start_line", m.start_line},
                               {"end_line", m.end_line},
                               {"label", to_string(e.member_labels.at(m.key().to_string()))}});
        }
        out.push_back({{"class_id", e.clone_class.class_id}, {"members", std::move(members)}});
    }
    return out;
}

}  // namespace volcano
