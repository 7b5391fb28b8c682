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

#include "groundkit/depparse.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "groundkit/error.h"

namespace groundkit {
namespace {

constexpr std::size_t kConlluColumns = 10;

std::vector<std::string_view> SplitTabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

std::optional<int> ParseInt(std::string_view s) {
  int value = 0;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc() || ptr != end || s.empty()) return std::nullopt;
  return value;
}

std::size_t FirstLine(const ParsedSentence& s) {
  return s.tokens.empty() ? 0 : s.tokens.front().line;
}

std::optional<std::size_t> LineOf(const DepToken& t) {
  return t.line == 0 ? std::nullopt : std::optional<std::size_t>(t.line);
}

char Lower(char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); }

bool EqualsIgnoreCase(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) { return Lower(x) == Lower(y); });
}

}  // namespace

std::vector<std::string> ParsedSentence::forms() const {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(t.form);
  return out;
}

void ValidateTree(const ParsedSentence& sentence) {
  const int n = static_cast<int>(sentence.size());
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "empty sentence");

  std::optional<std::size_t> root;
  for (int i = 0; i < n; ++i) {
    const DepToken& t = sentence.tokens[i];
    if (t.head < 0 || t.head > n) {
      throw Error(ErrorCode::kBadHead,
                  "head " + std::to_string(t.head) + " outside [0, " + std::to_string(n) + "]",
                  LineOf(t));
    }
    if (t.head == i + 1) {
      throw Error(ErrorCode::kBadHead, "token " + std::to_string(i + 1) + " is its own head",
                  LineOf(t));
    }
    if (t.head == 0) {
      if (root) {
        throw Error(ErrorCode::kMultipleRoots,
                    "tokens " + std::to_string(*root + 1) + " and " + std::to_string(i + 1) +
                        " both have head 0",
                    LineOf(t));
      }
      root = static_cast<std::size_t>(i);
    }
  }
  if (!root) {
    const std::size_t line = FirstLine(sentence);
    throw Error(ErrorCode::kNoRoot, "sentence has no token with head 0",
                line == 0 ? std::nullopt : std::optional<std::size_t>(line));
  }

  // 0 = unvisited, 1 = on the current path, 2 = known to reach the root.
  std::vector<int> state(n, 0);
  state[*root] = 2;
  for (int start = 0; start < n; ++start) {
    std::vector<int> path;
    int cur = start;
    while (state[cur] == 0) {
      state[cur] = 1;
      path.push_back(cur);
      cur = sentence.tokens[cur].head - 1;
    }
    if (state[cur] == 1) {
      throw Error(ErrorCode::kCycle,
                  "head links of token " + std::to_string(cur + 1) + " form a cycle",
                  LineOf(sentence.tokens[cur]));
    }
    for (int p : path) state[p] = 2;
  }
}

std::vector<ParsedSentence> ParseConllu(std::string_view text) {
  std::vector<ParsedSentence> sentences;
  ParsedSentence current;
  auto flush = [&] {
    if (current.tokens.empty()) return;
    ValidateTree(current);
    sentences.push_back(std::move(current));
    current = ParsedSentence{};
  };

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    if (line.empty()) {
      flush();
      continue;
    }
    if (line.front() == '#') continue;

    const auto fields = SplitTabs(line);
    if (fields.size() != kConlluColumns) {
      throw Error(ErrorCode::kBadColumnCount,
                  "expected 10 tab-separated columns, found " + std::to_string(fields.size()),
                  line_no);
    }
    const std::string_view id = fields[0];
    if (id.find('-') != std::string_view::npos || id.find('.') != std::string_view::npos) {
      continue;  // multiword range or empty node
    }
    const auto id_value = ParseInt(id);
    if (!id_value) {
      throw Error(ErrorCode::kBadNumber, "non-numeric ID '" + std::string(id) + "'", line_no);
    }
    if (*id_value != static_cast<int>(current.tokens.size()) + 1) {
      throw Error(ErrorCode::kBadNumber,
                  "ID " + std::string(id) + " out of sequence (expected " +
                      std::to_string(current.tokens.size() + 1) + ")",
                  line_no);
    }
    const auto head = ParseInt(fields[6]);
    if (!head) {
      throw Error(ErrorCode::kBadNumber, "non-numeric HEAD '" + std::string(fields[6]) + "'",
                  line_no);
    }
    current.tokens.push_back(
        DepToken{std::string(fields[1]), *head, std::string(fields[7]), line_no});
  }
  flush();
  return sentences;
}

std::vector<ParsedSentence> ReadConlluFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open CoNLL-U file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return ParseConllu(buf.str());
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.detail(), e.line());
  }
}

std::size_t FindRoot(const ParsedSentence& sentence) {
  for (std::size_t i = 0; i < sentence.size(); ++i) {
    if (sentence.tokens[i].head == 0) return i;
  }
  throw Error(ErrorCode::kNoRoot, "sentence has no token with head 0");
}

bool LooksLikeDelimiter(std::string_view token) {
  static constexpr std::string_view kDelimiters[] = {
      "[CLS]", "[SEP]", "[PAD]", "[MASK]", "<s>", "</s>", "<pad>", "<|endoftext|>", "<bos>", "<eos>",
  };
  return std::find(std::begin(kDelimiters), std::end(kDelimiters), token) !=
         std::end(kDelimiters);
}

SubwordAlignment AlignSubwords(std::span<const std::string> words,
                               std::span<const std::string> model_tokens,
                               std::string_view continuation_marker,
                               const std::vector<bool>& special) {
  if (!special.empty() && special.size() != model_tokens.size()) {
    throw Error(ErrorCode::kInvalidArgument, "special flag count does not match token count");
  }
  SubwordAlignment out;
  out.word_count = words.size();
  out.continuation_marker = std::string(continuation_marker);
  out.word_of_token.resize(model_tokens.size());

  auto mismatch = [&](std::size_t token, std::size_t word, const std::string& why) {
    return Error(ErrorCode::kAlignmentMismatch,
                 "token " + std::to_string(token) + " ('" + model_tokens[token] + "') vs word " +
                     std::to_string(word) + ": " + why);
  };

  // `word` is the word currently being assembled and `consumed` the number
  // of its characters already matched; word == words.size() means all done.
  std::size_t word = 0;
  std::size_t consumed = 0;
  bool started = false;
  for (std::size_t t = 0; t < model_tokens.size(); ++t) {
    const bool is_special =
        special.empty() ? LooksLikeDelimiter(model_tokens[t]) : static_cast<bool>(special[t]);
    if (is_special) {
      out.word_of_token[t] = std::nullopt;
      continue;
    }
    std::string_view piece = model_tokens[t];
    const bool continuation =
        !continuation_marker.empty() && piece.starts_with(continuation_marker);
    if (continuation) piece.remove_prefix(continuation_marker.size());
    if (piece.empty()) throw mismatch(t, word, "empty token piece");

    const bool in_progress = started && word < words.size() && consumed < words[word].size();
    if (!in_progress) {
      if (continuation && started) {
        throw mismatch(t, word, "continuation piece after a completed word");
      }
      if (started) {
        ++word;
        consumed = 0;
      }
      started = true;
      if (word >= words.size()) throw mismatch(t, word, "more tokens than words");
    }
    const std::string_view target = std::string_view(words[word]).substr(consumed);
    if (piece.size() > target.size() || !EqualsIgnoreCase(piece, target.substr(0, piece.size()))) {
      throw mismatch(t, word,
                     "piece does not continue '" + words[word] + "' at offset " +
                         std::to_string(consumed));
    }
    consumed += piece.size();
    out.word_of_token[t] = word;
  }

  const std::size_t assembled = !started ? 0 : word + (consumed == words[word].size() ? 1 : 0);
  if (assembled != words.size()) {
    throw Error(ErrorCode::kAlignmentMismatch,
                "tokens cover " + std::to_string(assembled) + " of " +
                    std::to_string(words.size()) + " words");
  }
  return out;
}

WeightVector MakeWeightVector(const SubwordAlignment& alignment, std::size_t root_word,
                              double alpha, bool include_special_tokens) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "alpha must lie in [0, 1], got " + std::to_string(alpha));
  }
  WeightVector out;
  out.alpha = alpha;

  std::optional<std::size_t> root_token;
  std::size_t included = 0;
  for (std::size_t t = 0; t < alignment.word_of_token.size(); ++t) {
    const auto& w = alignment.word_of_token[t];
    if (!w && !include_special_tokens) continue;
    if (w && *w == root_word) root_token = included;
    ++included;
  }
  if (!root_token) {
    throw Error(ErrorCode::kInvalidArgument,
                "root word " + std::to_string(root_word) + " has no model token");
  }
  out.root_token = *root_token;
  out.weights.resize(included);
  for (std::size_t i = 0; i < included; ++i) out.weights[i] = i <= *root_token ? 1.0 : alpha;
  return out;
}

}  // namespace groundkit
