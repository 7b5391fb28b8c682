/*
 Copyright 2026 The groundkit Authors
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

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace groundkit {

struct DepToken {
  std::string form;
  int head = 0;  // 0 for the root, otherwise the 1-based id of the parent
  std::string relation;
  std::size_t line = 0;  // source line, 0 when built in memory
};

struct ParsedSentence {
  std::vector<DepToken> tokens;

  std::size_t size() const { return tokens.size(); }
  std::vector<std::string> forms() const;
};

// Reads a CoNLL-U document. Comment lines, multiword ranges ("2-3") and
// empty nodes ("2.1") are skipped. Every sentence must form a tree with a
// single root; violations throw Error carrying the offending line number.
std::vector<ParsedSentence> ParseConllu(std::string_view text);
std::vector<ParsedSentence> ReadConlluFile(const std::string& path);

// Checks the tree invariants of an in-memory sentence.
void ValidateTree(const ParsedSentence& sentence);

// 0-based index of the word without a parent.
std::size_t FindRoot(const ParsedSentence& sentence);

// For each model token, the word it belongs to, or nullopt for delimiter
// tokens such as [CLS] and [SEP].
struct SubwordAlignment {
  std::vector<std::optional<std::size_t>> word_of_token;
  std::size_t word_count = 0;
  std::string continuation_marker = "##";

  bool is_special(std::size_t token) const { return !word_of_token[token].has_value(); }
};

// True for the usual sequence delimiters ([CLS], [SEP], [PAD], <s>, </s>, ...).
bool LooksLikeDelimiter(std::string_view token);

// Greedy left-to-right assembly of model tokens into words. Tokens starting
// with the continuation marker extend the current word; matching is
// ASCII case-insensitive. When `special` is empty, delimiters are detected
// with LooksLikeDelimiter. Throws Error(kAlignmentMismatch) with the token
// and word positions when the tokens cannot reproduce the words.
SubwordAlignment AlignSubwords(std::span<const std::string> words,
                               std::span<const std::string> model_tokens,
                               std::string_view continuation_marker = "##",
                               const std::vector<bool>& special = {});

// Root-relative token weights: 1 up to and including the last model token of
// the root word, alpha afterwards.
struct WeightVector {
  std::vector<double> weights;  // one per included model token
  double alpha = 1.0;
  std::size_t root_token = 0;  // index into `weights`
};

WeightVector MakeWeightVector(const SubwordAlignment& alignment, std::size_t root_word,
                              double alpha, bool include_special_tokens = false);

}  // namespace groundkit
