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

#include <volcano/diagnostics.hpp>
#include <volcano/error.hpp>

#include <algorithm>

namespace volcano {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::kMissingRoot: return "MissingRoot";
        case ErrorCode::kIo: return "IoError";
        case ErrorCode::kInvalidAddress: return "InvalidAddress";
        case ErrorCode::kNotVerified: return "NotVerified";
        case ErrorCode::kRateLimited: return "RateLimited";
        case ErrorCode::kNetworkError: return "NetworkError";
        case ErrorCode::kInvalidConfig: return "InvalidConfig";
        case ErrorCode::kModeError: return "ModeError";
        case ErrorCode::kModeMismatch: return "ModeMismatch";
        case ErrorCode::kEmptyFragment: return "EmptyFragment";
        case ErrorCode::kCacheConfigMismatch: return "CacheConfigMismatch";
        case ErrorCode::kCacheCorrupt: return "CacheCorrupt";
        case ErrorCode::kUnlabeledContract: return "UnlabeledContract";
        case ErrorCode::kMissingAnnotation: return "MissingAnnotation";
        case ErrorCode::kUnknownType: return "UnknownType";
        case ErrorCode::kEmptySignatureSet: return "EmptySignatureSet";
    }
    return "Unknown";
}

std::string_view to_string(WarningCode code) {
    switch (code) {
        case WarningCode::kEmptyCorpus: return "EmptyCorpus";
        case WarningCode::kInvalidUtf8: return "InvalidUtf8";
        case WarningCode::kEmptySource: return "EmptySource";
        case WarningCode::kUnterminatedComment: return "UnterminatedComment";
        case WarningCode::kUnterminatedString: return "UnterminatedString";
        case WarningCode::kExtractionIncomplete: return "ExtractionIncomplete";
        case WarningCode::kCacheFallback: return "CacheFallback";
        case WarningCode::kEmptySet: return "EmptySet";
    }
    return "Unknown";
}

void Diagnostics::warn(WarningCode code, std::string message) {
    std::lock_guard lock{mutex_};
    warnings_.push_back({code, std::move(message)});
}

std::vector<Warning> Diagnostics::warnings() const {
    std::lock_guard lock{mutex_};
    return warnings_;
}

std::size_t Diagnostics::count(WarningCode code) const {
    std::lock_guard lock{mutex_};
    return static_cast<std::size_t>(
        std::count_if(warnings_.begin(), warnings_.end(), [code](const Warning& w) { return w.code == code; }));
}

bool Diagnostics::empty() const {
    std::lock_guard lock{mutex_};
    return warnings_.empty();
}

}  // namespace volcano
