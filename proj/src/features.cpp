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

#include "skillner/features.hpp"

#include <algorithm>
#include <istream>
#include <ostream>

#include "skillner/error.hpp"

namespace skillner {

namespace {

const std::string kKindNames[kNumFeatureKinds] = {"LEMMA", "POS", "DEP"};

const std::string& attr_value(const AnnotatedToken& token, FeatureKind kind) {
  switch (kind) {
    case FeatureKind::Lemma: return token.lemma;
    case FeatureKind::Pos: return token.pos;
    case FeatureKind::Dep: return token.dep;
  }
  throw DataError("bad feature kind");
}

}  // namespace

const std::string& to_string(FeatureKind kind) {
  return kKindNames[static_cast<int>(kind)];
}

std::string FeatureVocab::key(FeatureKind kind, int offset,
                              const std::string& value) {
  return kKindNames[static_cast<int>(kind)] + "\x1f" +
         std::to_string(offset) + "\x1f" + value;
}

std::int64_t FeatureVocab::column(FeatureKind kind, int offset,
                                  const std::string& value) {
  const std::string k = key(kind, offset, value);
  auto it = index_.find(k);
  if (it != index_.end()) return it->second;
  if (frozen_) return -1;
  const std::int64_t col = static_cast<std::int64_t>(names_.size());
  index_.emplace(k, col);
  names_.push_back(k);
  return col;
}

std::int64_t FeatureVocab::lookup(FeatureKind kind, int offset,
                                  const std::string& value) const {
  auto it = index_.find(key(kind, offset, value));
  return it == index_.end() ? -1 : it->second;
}

void FeatureVocab::save(std::ostream& out) const {
  out << "feature_vocab\t" << window_ << '\t' << names_.size() << '\n';
  for (std::size_t col = 0; col < names_.size(); ++col) {
    const std::string& name = names_[col];
    // key = kind \x1f offset \x1f value
    const std::size_t a = name.find('\x1f');
    const std::size_t b = name.find('\x1f', a + 1);
    out << name.substr(0, a) << '\t' << name.substr(a + 1, b - a - 1) << '\t'
        << name.substr(b + 1) << '\t' << col << '\n';
  }
}

FeatureVocab FeatureVocab::load(std::istream& in) {
  std::string tag;
  int window = 0;
  std::size_t count = 0;
  in >> tag >> window >> count;
  if (tag != "feature_vocab") throw DataError("bad feature vocab header");
  in.ignore(1);
  FeatureVocab vocab(window);
  for (std::size_t i = 0; i < count; ++i) {
    std::string line;
    if (!std::getline(in, line)) throw DataError("truncated feature vocab");
    const std::size_t t1 = line.find('\t');
    const std::size_t t2 = line.find('\t', t1 + 1);
    const std::size_t t3 = line.rfind('\t');
    if (t1 == std::string::npos || t2 == std::string::npos || t3 <= t2) {
      throw DataError("malformed feature vocab line: " + line);
    }
    const std::string kind = line.substr(0, t1);
    const std::string offset = line.substr(t1 + 1, t2 - t1 - 1);
    const std::string value = line.substr(t2 + 1, t3 - t2 - 1);
    const std::string k = kind + "\x1f" + offset + "\x1f" + value;
    vocab.index_.emplace(k, static_cast<std::int64_t>(vocab.names_.size()));
    vocab.names_.push_back(k);
  }
  vocab.freeze();
  return vocab;
}

WordVocab::WordVocab() {
  words_ = {"<PAD>", "<UNK>"};
  index_ = {{"<PAD>", kPadId}, {"<UNK>", kUnkId}};
}

int WordVocab::add(const std::string& lemma) {
  auto it = index_.find(lemma);
  if (it != index_.end()) return it->second;
  const int id = static_cast<int>(words_.size());
  index_.emplace(lemma, id);
  words_.push_back(lemma);
  return id;
}

int WordVocab::id(const std::string& lemma) const {
  auto it = index_.find(lemma);
  return it == index_.end() ? kUnkId : it->second;
}

void WordVocab::save(std::ostream& out) const {
  out << "word_vocab\t" << words_.size() << '\n';
  for (std::size_t i = 0; i < words_.size(); ++i) {
    out << words_[i] << '\t' << i << '\n';
  }
}

WordVocab WordVocab::load(std::istream& in) {
  std::string tag;
  std::size_t count = 0;
  in >> tag >> count;
  if (tag != "word_vocab") throw DataError("bad word vocab header");
  in.ignore(1);
  WordVocab vocab;
  for (std::size_t i = 0; i < count; ++i) {
    std::string line;
    if (!std::getline(in, line)) throw DataError("truncated word vocab");
    const std::size_t tab = line.rfind('\t');
    if (tab == std::string::npos) {
      throw DataError("malformed word vocab line: " + line);
    }
    const std::string word = line.substr(0, tab);
    if (i < 2) continue;  // reserved rows were installed by the constructor
    vocab.add(word);
  }
  return vocab;
}

FeatureVocab fit_vocab(const std::vector<Sentence>& corpus, int window) {
  if (corpus.empty()) throw DataError("cannot fit a vocab on an empty corpus");
  if (window < 0) throw DataError("window must be non-negative");
  FeatureVocab vocab(window);
  for (const Sentence& sentence : corpus) {
    const std::int64_t n = static_cast<std::int64_t>(sentence.tokens.size());
    for (std::int64_t i = 0; i < n; ++i) {
      for (int offset = -window; offset <= window; ++offset) {
        const std::int64_t j = i + offset;
        for (int k = 0; k < kNumFeatureKinds; ++k) {
          const FeatureKind kind = static_cast<FeatureKind>(k);
          const std::string& value =
              (j < 0 || j >= n) ? std::string(kPadValue)
                                : attr_value(sentence.tokens[j], kind);
          vocab.column(kind, offset, value);
        }
      }
    }
  }
  vocab.freeze();
  return vocab;
}

std::vector<std::int64_t> vectorize_token(const Sentence& sentence,
                                          std::size_t index,
                                          const FeatureVocab& vocab) {
  const std::int64_t n = static_cast<std::int64_t>(sentence.tokens.size());
  const std::int64_t i = static_cast<std::int64_t>(index);
  std::vector<std::int64_t> columns;
  for (int offset = -vocab.window(); offset <= vocab.window(); ++offset) {
    const std::int64_t j = i + offset;
    for (int k = 0; k < kNumFeatureKinds; ++k) {
      const FeatureKind kind = static_cast<FeatureKind>(k);
      const std::string& value =
          (j < 0 || j >= n) ? std::string(kPadValue)
                            : attr_value(sentence.tokens[j], kind);
      const std::int64_t col = vocab.lookup(kind, offset, value);
      if (col >= 0) columns.push_back(col);
    }
  }
  std::sort(columns.begin(), columns.end());
  columns.erase(std::unique(columns.begin(), columns.end()), columns.end());
  return columns;
}

WordVocab fit_word_vocab(const std::vector<Sentence>& corpus) {
  WordVocab vocab;
  for (const Sentence& sentence : corpus) {
    for (const AnnotatedToken& token : sentence.tokens) vocab.add(token.lemma);
  }
  return vocab;
}

std::vector<EncodedChunk> encode_sequence(const Sentence& sentence,
                                          const WordVocab& vocab,
                                          std::size_t max_len) {
  if (max_len == 0) throw DataError("max_len must be positive");
  std::vector<EncodedChunk> chunks;
  const std::size_t n = sentence.tokens.size();
  for (std::size_t begin = 0; begin == 0 || begin < n; begin += max_len) {
    EncodedChunk chunk;
    chunk.token_offset = begin;
    chunk.ids.assign(max_len, WordVocab::kPadId);
    chunk.mask.assign(max_len, 0);
    const std::size_t count = std::min(max_len, n - std::min(n, begin));
    for (std::size_t i = 0; i < count; ++i) {
      chunk.ids[i] = vocab.id(sentence.tokens[begin + i].lemma);
      chunk.mask[i] = 1;
    }
    chunks.push_back(std::move(chunk));
    if (n == 0) break;
  }
  return chunks;
}

}  // namespace skillner
