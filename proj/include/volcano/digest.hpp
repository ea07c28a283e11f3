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

#include <cstdint>
#include <string>
#include <string_view>

namespace volcano {

//! Lowercase hex SHA-256 of the given bytes.
std::string sha256_hex(std::string_view bytes);

using LineDigest = std::uint64_t;

//! 64-bit FNV-1a. Stable across platforms and runs, unlike std::hash.
constexpr LineDigest line_digest(std::string_view line) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const char c : line) {
        h ^= static_cast<std::uint8_t>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace volcano
