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
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace volcano::testing {

//! One vulnerability signature listing as published, with facts about it
//! worked out by hand from the text.
struct PublishedListing {
    std::string label;
    //! Caption as printed.
    std::string caption;
    //! Serialized vulnerability type the caption names.
    std::string vuln_type;
    std::string text;
    //! Normalized line count: header, braces and statements on their own lines.
    std::size_t normalized_lines;
    //! Identifiers outside the builtin vocabulary, in order of first use.
    std::vector<std::string> identifiers;
    //! 0-based raw line indices after which a new statement starts cleanly.
    std::vector<int> insertion_points;
    //! Inclusive raw line range forming exactly one removable statement.
    std::pair<int, int> deletion;
};

//! The eleven published listings in order of appearance. The `\\` comment
//! markers of the typeset text are written as `//`.
const std::vector<PublishedListing>& published_listings();

//! Statements built only from builtins, keywords and literals, so inserting
//! one never shifts consistent renaming indices.
const std::vector<std::string>& neutral_statements();

//! Replaces whole-word occurrences of each key.
std::string rename_words(const std::string& text, const std::map<std::string, std::string>& renaming);

//! Random bijective renaming of `identifiers` to fresh names.
std::map<std::string, std::string> random_renaming(const std::vector<std::string>& identifiers, std::mt19937_64& rng);

std::string insert_after_line(const std::string& text, int line_index, const std::string& statement);
std::string delete_lines(const std::string& text, int first, int last);

//! Safe functions: checks-effects-interactions withdrawals, owner-guarded
//! selfdestruct, loops without external calls and similar.
const std::vector<std::string>& benign_functions();

//! A random but well-formed function named `name` with `statements` body
//! statements. Every statement carries a literal drawn from `rng`.
std::string random_function(const std::string& name, int statements, std::mt19937_64& rng);

//! A contract wrapping the given functions.
std::string wrap_contract(const std::string& name, const std::string& pragma, const std::vector<std::string>& functions);

std::string random_identifier(std::mt19937_64& rng, std::size_t length = 8);

}  // namespace volcano::testing
