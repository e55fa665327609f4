// Copyright 2026 The skillner Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SKILLNER_FEATURES_HPP_
#define SKILLNER_FEATURES_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

#include "skillner/corpus.hpp"

namespace skillner {

enum class FeatureKind : int { Lemma = 0, Pos = 1, Dep = 2 };

inline constexpr int kNumFeatureKinds = 3;
inline constexpr const char* kPadValue = "<PAD>";

const std::string& to_string(FeatureKind kind);

/// Windowed categorical feature space for the linear classifier: one dense
/// 0-based column per observed (kind, offset, value). Out-of-sentence
/// offsets observe the sentinel "<PAD>". Columns are assigned in first-seen
/// corpus order, so refitting the same corpus reproduces the same layout.
class FeatureVocab {
 public:
  FeatureVocab() = default;
  explicit FeatureVocab(int window) : window_(window) {}

  int window() const { return window_; }
  std::size_t size() const { return names_.size(); }

  /// Column for (kind, offset, value); inserts when unfrozen, returns -1
  /// for unknown values once frozen.
  std::int64_t column(FeatureKind kind, int offset, const std::string& value);
  std::int64_t lookup(FeatureKind kind, int offset,
                      const std::string& value) const;

  void freeze() { frozen_ = true; }
  bool frozen() const { return frozen_; }

  void save(std::ostream& out) const;
  static FeatureVocab load(std::istream& in);

  bool operator==(const FeatureVocab& other) const {
    return window_ == other.window_ && names_ == other.names_;
  }

 private:
  static std::string key(FeatureKind kind, int offset,
                         const std::string& value);

  int window_ = 2;
  bool frozen_ = false;
  std::unordered_map<std::string, std::int64_t> index_;
  std::vector<std::string> names_;  // column -> encoded key, for serialization
};

/// Lemma ids for the embedding model. Ids 0 and 1 are reserved.
class WordVocab {
 public:
  static constexpr int kPadId = 0;
  static constexpr int kUnkId = 1;

  WordVocab();

  int add(const std::string& lemma);          // inserts if absent
  int id(const std::string& lemma) const;     // kUnkId when absent
  std::size_t size() const { return words_.size(); }
  const std::string& word(int id) const { return words_[id]; }

  void save(std::ostream& out) const;
  static WordVocab load(std::istream& in);

  bool operator==(const WordVocab& other) const {
    return words_ == other.words_;
  }

 private:
  std::unordered_map<std::string, int> index_;
  std::vector<std::string> words_;
};

/// Fits the windowed feature space over an annotated corpus.
/// `window` is the half-width w; features cover offsets [-w, +w].
FeatureVocab fit_vocab(const std::vector<Sentence>& corpus, int window = 2);

/// Active columns (sorted, duplicate-free) for one token under a frozen
/// vocab; unseen values contribute nothing.
std::vector<std::int64_t> vectorize_token(const Sentence& sentence,
                                          std::size_t index,
                                          const FeatureVocab& vocab);

WordVocab fit_word_vocab(const std::vector<Sentence>& corpus);

/// A fixed-length slice of a sentence for the sequence model.
struct EncodedChunk {
  std::vector<int> ids;        // length max_len, PAD-filled
  std::vector<std::uint8_t> mask;  // 1 for real tokens
  std::size_t token_offset = 0;    // index of ids[0] within the sentence
};

/// Lemma-id encoding, right-padded to max_len. Sentences longer than
/// max_len are split into consecutive chunks so no token goes unlabeled.
std::vector<EncodedChunk> encode_sequence(const Sentence& sentence,
                                          const WordVocab& vocab,
                                          std::size_t max_len = 50);

}  // namespace skillner

#endif  // SKILLNER_FEATURES_HPP_
