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


#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <volcano/fetcher.hpp>

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <thread>

#include <nlohmann/json.hpp>

#include <volcano/error.hpp>

namespace volcano {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum class Failure { kNone, kRate, kNetwork };

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::string encode_query_value(std::string_view v) {
    static constexpr char kHex[] = "0123456789ABCDEF";
    std::string out;
    for (const unsigned char c : v) {
        if (std::isalnum(c) != 0 || c == '-' || c == '_' || c == '.' || c == '~') {
            out.push_back(static_cast<char>(c));
        } else {
            out.push_back('%');
            out.push_back(kHex[c >> 4]);
            out.push_back(kHex[c & 0xF]);
        }
    }
    return out;
}

}  // namespace

bool is_valid_address(std::string_view address) {
    if (address.size() != 42 || address[0] != '0' || (address[1] != 'x' && address[1] != 'X')) return false;
    return std::all_of(address.begin() + 2, address.end(),
                       [](unsigned char c) { return std::isxdigit(c) != 0; });
}

HttpGet default_http_get() {
    return [](const std::string& url) -> HttpResponse {
        const auto scheme_end = url.find("://");
        const auto host_end = url.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
        const std::string origin = url.substr(0, host_end);
        const std::string target = host_end == std::string::npos ? "/" : url.substr(host_end);
        httplib::Client client{origin};
        client.set_connection_timeout(10);
        client.set_read_timeout(30);
        client.set_follow_location(true);
        auto res = client.Get(target);
        if (!res) return {0, {}, httplib::to_string(res.error())};
        return {res->status, res->body, {}};
    };
}

Fetcher::Fetcher(FetchOptions options, HttpGet http, Sleeper sleep, SteadyNow now)
    : options_{std::move(options)}, http_{std::move(http)}, sleep_{std::move(sleep)}, now_{std::move(now)} {
    if (!sleep_) sleep_ = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
    if (!now_) now_ = [] { return std::chrono::steady_clock::now(); };
    if (options_.requests_per_second <= 0.0) throw Error(ErrorCode::kInvalidConfig, "request rate must be positive");
    if (options_.max_retries < 0) throw Error(ErrorCode::kInvalidConfig, "retry count must not be negative");
}

std::string Fetcher::request_url(std::string_view address) const {
    std::string url = options_.explorer_url;
    url += url.find('?') == std::string::npos ? '?' : '&';
    url += "module=contract&action=getsourcecode&address=" + encode_query_value(address);
    if (!options_.api_key.empty()) url += "&apikey=" + encode_query_value(options_.api_key);
    return url;
}

void Fetcher::wait_for_budget() {
    const auto interval = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::duration<double, std::milli>(1000.0 / options_.requests_per_second));
    if (last_request_) {
        const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(now_() - *last_request_);
        if (elapsed < interval) sleep_(interval - elapsed);
    }
    last_request_ = now_();
}

std::string Fetcher::fetch_source(std::string_view address) {
    if (!is_valid_address(address)) {
        throw Error(ErrorCode::kInvalidAddress, "malformed address '" + std::string{address} + "'");
    }
    const std::string url = request_url(address);
    Failure last = Failure::kNone;
    std::string detail;
    for (int attempt = 0; attempt <= options_.max_retries; ++attempt) {
        if (attempt > 0) sleep_(options_.backoff_base * (1LL << (attempt - 1)));
        wait_for_budget();
        const HttpResponse res = http_(url);
        ++requests_;

        if (res.status == 0) {
            last = Failure::kNetwork;
            detail = res.error.empty() ? "connection failed" : res.error;
            continue;
        }
        if (res.status == 429) {
            last = Failure::kRate;
            detail = "HTTP 429";
            continue;
        }
        if (res.status >= 500) {
            last = Failure::kNetwork;
            detail = "HTTP " + std::to_string(res.status);
            continue;
        }
        if (res.status != 200) {
            throw Error(ErrorCode::kNetworkError, "explorer answered HTTP " + std::to_string(res.status));
        }

        json body;
        try {
            body = json::parse(res.body);
        } catch (const json::exception&) {
            throw Error(ErrorCode::kNetworkError, "explorer answer is not JSON");
        }
        const std::string status = body.value("status", "");
        const auto& result = body.contains("result") ? body.at("result") : json{};
        if (status == "1" && result.is_array() && !result.empty() && result.at(0).is_object()) {
            const std::string source = result.at(0).value("SourceCode", "");
            if (source.empty()) {
                throw Error(ErrorCode::kNotVerified, "no verified source for " + std::string{address});
            }
            return source;
        }
        const std::string message = result.is_string() ? result.get<std::string>() : body.value("message", "");
        const std::string lowered = lower(message);
        if (lowered.find("rate limit") != std::string::npos) {
            last = Failure::kRate;
            detail = message;
            continue;
        }
        if (lowered.find("not verified") != std::string::npos) {
            throw Error(ErrorCode::kNotVerified, "no verified source for " + std::string{address});
        }
        throw Error(ErrorCode::kNetworkError, "explorer error: " + (message.empty() ? res.body : message));
    }
    const std::string tries = std::to_string(options_.max_retries + 1) + " attempts";
    if (last == Failure::kRate) throw Error(ErrorCode::kRateLimited, "rate limited after " + tries + ": " + detail);
    throw Error(ErrorCode::kNetworkError, "request failed after " + tries + ": " + detail);
}

SourceContract Fetcher::fetch(std::string_view address, const fs::path& out_dir) {
    std::string source = fetch_source(address);
    fs::create_directories(out_dir);
    const std::string name = std::string{address} + ".sol";
    const fs::path path = out_dir / name;
    std::ofstream out{path, std::ios::binary | std::ios::trunc};
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
    out.write(source.data(), static_cast<std::streamsize>(source.size()));
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
    return SourceContract::from_text(name, std::move(source), path);
}

std::string explorer_key_from_env() {
    const char* key = std::getenv(std::string{kExplorerKeyEnv}.c_str());
    return key == nullptr ? std::string{} : std::string{key};
}

}  // namespace volcano
