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

#ifndef SKILLNER_CORPUS_HPP_
#define SKILLNER_CORPUS_HPP_

#include <optional>
#include <string>
#include <vector>

namespace skillner {

/// Per-token labels marking extraction-context spans. The numeric order
/// (O, B-EXTR, I-EXTR) is frozen: classifiers break argmax ties toward the
/// lower index, so O wins against equal scores.
enum class BioTag : int { O = 0, BeginExtr = 1, InsideExtr = 2 };

inline constexpr int kNumBioTags = 3;

const std::string& to_string(BioTag tag);

/// Parses "O" / "B-EXTR" / "I-EXTR"; anything else raises DataError.
BioTag bio_tag_from_string(const std::string& s);

/// One token with its linguistic annotations. `tag` is present only on
/// labeled corpora.
struct AnnotatedToken {
  std::string text;
  std::string lemma;
  std::string pos;
  std::string dep;
  std::optional<BioTag> tag;

  bool operator==(const AnnotatedToken&) const = default;
};

struct Sentence {
  std::vector<AnnotatedToken> tokens;
  std::string source_id;

  bool operator==(const Sentence&) const = default;
};

/// Half-open token extent [start, end) of an extraction context.
struct Span {
  std::size_t start = 0;
  std::size_t end = 0;

  bool operator==(const Span&) const = default;
  auto operator<=>(const Span&) const = default;
};

/// Annotator provenance values recorded in corpus files and reports.
inline constexpr const char* kAnnotatorNaive = "naive";
inline constexpr const char* kAnnotatorExternal = "external-conll";

/// A parsed corpus file: sentences plus the annotator that produced them
/// (empty when the file does not say).
struct ConllFile {
  std::vector<Sentence> sentences;
  std::string annotator;
};

/// Reads a tab-separated corpus: 4 or 5 columns per token line
/// (text, lemma, pos, dep[, tag]), blank line between sentences.
/// "# key = value" comment lines carry source_id / annotator metadata.
std::vector<Sentence> read_conll(const std::string& path);

ConllFile read_conll_file(const std::string& path);

/// Writes the same format back. read_conll(write_conll(x)) == x field for
/// field, and files produced here survive a read/write cycle byte-exactly.
void write_conll(const std::vector<Sentence>& sentences,
                 const std::string& path, const std::string& annotator = "");

/// Renders spans over a sentence of `sentence_len` tokens as BIO tags.
/// Spans must be sorted, non-overlapping and inside [0, sentence_len).
std::vector<BioTag> spans_to_bio(std::size_t sentence_len,
                                 const std::vector<Span>& spans);

/// Decodes tags back to spans. Never fails: a stray I-EXTR after O or at
/// sentence start is repaired as B-EXTR, since classifiers emit per-token
/// labels and decoding must not crash.
std::vector<Span> bio_to_spans(const std::vector<BioTag>& tags);

/// True iff every I-EXTR is preceded by B-EXTR or I-EXTR.
bool is_well_formed(const std::vector<BioTag>& tags);

/// Fallback annotator for raw text when no parsed corpus is supplied.
/// Sentences split on ./!/? tokens; tokens split on whitespace and ASCII
/// punctuation (each punctuation char is its own token); lemma = lowercased
/// text, pos = "X", dep = "dep". Deliberately crude; corpora it produces
/// are stamped with the "naive" annotator flag.
std::vector<Sentence> naive_annotate(const std::string& text,
                                     const std::string& source_id = "");

/// Tag sequence of a fully tagged sentence; raises DataError on a missing tag.
std::vector<BioTag> sentence_tags(const Sentence& sentence);

}  // namespace skillner

#endif  // SKILLNER_CORPUS_HPP_
