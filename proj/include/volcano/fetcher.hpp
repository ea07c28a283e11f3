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

#include <chrono>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include <volcano/corpus.hpp>

namespace volcano {

inline constexpr std::string_view kExplorerKeyEnv = "VOLCANO_EXPLORER_KEY";
inline constexpr std::string_view kDefaultExplorerUrl = "https://api.etherscan.io/api";

//! `0x` followed by exactly 40 hex digits.
bool is_valid_address(std::string_view address);

struct HttpResponse {
    //! 0 when the request never produced a response (connection failure).
    int status{0};
    std::string body;
    std::string error;
};

//! Performs one GET of a complete URL.
using HttpGet = std::function<HttpResponse(const std::string& url)>;
using Sleeper = std::function<void(std::chrono::milliseconds)>;
using SteadyNow = std::function<std::chrono::steady_clock::time_point()>;

//! cpp-httplib backed transport (HTTP and HTTPS).
HttpGet default_http_get();

struct FetchOptions {
    std::string explorer_url{kDefaultExplorerUrl};
    std::string api_key;
    double requests_per_second{5.0};
    int max_retries{3};
    std::chrono::milliseconds backoff_base{1000};
};

//! Block-explorer client for verified contract source. Requests are spaced
//! to honor the rate budget; transient failures (HTTP 429/5xx, connection
//! errors, explorer rate-limit answers) are retried with exponential backoff.
class Fetcher {
  public:
    explicit Fetcher(FetchOptions options, HttpGet http = default_http_get(),
                     Sleeper sleep = nullptr, SteadyNow now = nullptr);

    //! Retrieves the verified source of `address` and writes it unmodified to
    //! `out_dir/<address>.sol`. Throws Error(kInvalidAddress) before any
    //! request, Error(kNotVerified), Error(kRateLimited) or Error(kNetworkError).
    SourceContract fetch(std::string_view address, const std::filesystem::path& out_dir);

    //! Source text only, nothing persisted.
    std::string fetch_source(std::string_view address);

    [[nodiscard]] std::string request_url(std::string_view address) const;
    [[nodiscard]] std::size_t requests_made() const noexcept { return requests_; }

  private:
    void wait_for_budget();

    FetchOptions options_;
    HttpGet http_;
    Sleeper sleep_;
    SteadyNow now_;
    std::optional<std::chrono::steady_clock::time_point> last_request_;
    std::size_t requests_{0};
};

//! Value of VOLCANO_EXPLORER_KEY, empty when unset.
std::string explorer_key_from_env();

}  // namespace volcano
