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

#include <mutex>
#include <string>
#include <string_view>
#include <vector>

namespace volcano {

enum class WarningCode {
    kEmptyCorpus,
    kInvalidUtf8,
    kEmptySource,
    kUnterminatedComment,
    kUnterminatedString,
    kExtractionIncomplete,
    kCacheFallback,
    kEmptySet,
};

std::string_view to_string(WarningCode code);

struct Warning {
    WarningCode code;
    std::string message;
};

//! Thread-safe sink for non-fatal conditions. Library calls take an optional
//! pointer; a null sink drops warnings.
class Diagnostics {
  public:
    void warn(WarningCode code, std::string message);

    [[nodiscard]] std::vector<Warning> warnings() const;
    [[nodiscard]] std::size_t count(WarningCode code) const;
    [[nodiscard]] bool empty() const;

  private:
    mutable std::mutex mutex_;
    std::vector<Warning> warnings_;
};

inline void warn(Diagnostics* diag, WarningCode code, std::string message) {
    if (diag != nullptr) diag->warn(code, std::move(message));
}

}  // namespace volcano
