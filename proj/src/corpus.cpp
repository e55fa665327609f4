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

#include "skillner/corpus.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "skillner/error.hpp"

namespace skillner {

namespace {

const std::string kTagNames[kNumBioTags] = {"O", "B-EXTR", "I-EXTR"};

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t begin = 0;
  while (true) {
    const std::size_t tab = line.find('\t', begin);
    if (tab == std::string::npos) {
      fields.push_back(line.substr(begin));
      break;
    }
    fields.push_back(line.substr(begin, tab - begin));
    begin = tab + 1;
  }
  return fields;
}

// "# key = value" metadata comment; returns false for other comments.
bool parse_meta(const std::string& line, std::string& key, std::string& value) {
  std::size_t i = 1;
  while (i < line.size() && line[i] == ' ') ++i;
  const std::size_t eq = line.find(" = ", i);
  if (eq == std::string::npos || eq == i) return false;
  key = line.substr(i, eq - i);
  value = line.substr(eq + 3);
  return true;
}

}  // namespace

const std::string& to_string(BioTag tag) {
  return kTagNames[static_cast<int>(tag)];
}

BioTag bio_tag_from_string(const std::string& s) {
  for (int i = 0; i < kNumBioTags; ++i) {
    if (s == kTagNames[i]) return static_cast<BioTag>(i);
  }
  throw DataError("unknown BIO tag: '" + s + "'");
}

ConllFile read_conll_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open corpus file: " + path);

  ConllFile file;
  Sentence current;
  std::string pending_source_id;
  std::string line;
  std::size_t line_no = 0;

  auto flush = [&] {
    if (!current.tokens.empty()) {
      file.sentences.push_back(std::move(current));
      current = Sentence{};
    }
    pending_source_id.clear();
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      flush();
      continue;
    }
    if (line[0] == '#') {
      std::string key, value;
      if (parse_meta(line, key, value)) {
        if (key == "annotator") {
          file.annotator = value;
        } else if (key == "source_id") {
          pending_source_id = value;
        }
      }
      continue;
    }
    const std::vector<std::string> fields = split_tabs(line);
    if (fields.size() != 4 && fields.size() != 5) {
      throw DataError(path + ":" + std::to_string(line_no) +
                      ": expected 4 or 5 tab-separated columns, got " +
                      std::to_string(fields.size()));
    }
    if (fields[0].empty()) {
      throw DataError(path + ":" + std::to_string(line_no) +
                      ": empty token text");
    }
    AnnotatedToken tok;
    tok.text = fields[0];
    tok.lemma = fields[1];
    tok.pos = fields[2];
    tok.dep = fields[3];
    if (fields.size() == 5) {
      try {
        tok.tag = bio_tag_from_string(fields[4]);
      } catch (const DataError& e) {
        throw DataError(path + ":" + std::to_string(line_no) + ": " +
                        e.what());
      }
    }
    if (current.tokens.empty()) current.source_id = pending_source_id;
    current.tokens.push_back(std::move(tok));
  }
  flush();
  return file;
}

std::vector<Sentence> read_conll(const std::string& path) {
  return read_conll_file(path).sentences;
}

void write_conll(const std::vector<Sentence>& sentences,
                 const std::string& path, const std::string& annotator) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write corpus file: " + path);
  if (!annotator.empty()) out << "# annotator = " << annotator << "\n";
  for (const Sentence& sentence : sentences) {
    if (!sentence.source_id.empty()) {
      out << "# source_id = " << sentence.source_id << "\n";
    }
    for (const AnnotatedToken& tok : sentence.tokens) {
      out << tok.text << '\t' << tok.lemma << '\t' << tok.pos << '\t'
          << tok.dep;
      if (tok.tag) out << '\t' << to_string(*tok.tag);
      out << '\n';
    }
    out << '\n';
  }
  if (!out) throw DataError("short write on corpus file: " + path);
}

std::vector<BioTag> spans_to_bio(std::size_t sentence_len,
                                 const std::vector<Span>& spans) {
  std::vector<BioTag> tags(sentence_len, BioTag::O);
  std::size_t previous_end = 0;
  bool first = true;
  for (const Span& span : spans) {
    if (span.start >= span.end || span.end > sentence_len) {
      throw DataError("span [" + std::to_string(span.start) + "," +
                      std::to_string(span.end) + ") out of range for length " +
                      std::to_string(sentence_len));
    }
    if (!first && span.start < previous_end) {
      throw DataError("spans overlap or are unsorted at [" +
                      std::to_string(span.start) + "," +
                      std::to_string(span.end) + ")");
    }
    tags[span.start] = BioTag::BeginExtr;
    for (std::size_t i = span.start + 1; i < span.end; ++i) {
      tags[i] = BioTag::InsideExtr;
    }
    previous_end = span.end;
    first = false;
  }
  return tags;
}

std::vector<Span> bio_to_spans(const std::vector<BioTag>& tags) {
  std::vector<Span> spans;
  for (std::size_t i = 0; i < tags.size(); ++i) {
    if (tags[i] == BioTag::O) continue;
    // B-EXTR opens a span; a stray I-EXTR is repaired as B-EXTR.
    std::size_t end = i + 1;
    while (end < tags.size() && tags[end] == BioTag::InsideExtr) ++end;
    spans.push_back(Span{i, end});
    i = end - 1;
  }
  return spans;
}

bool is_well_formed(const std::vector<BioTag>& tags) {
  BioTag prev = BioTag::O;
  for (const BioTag tag : tags) {
    if (tag == BioTag::InsideExtr && prev == BioTag::O) return false;
    prev = tag;
  }
  return true;
}

std::vector<Sentence> naive_annotate(const std::string& text,
                                     const std::string& source_id) {
  // Tokenize: runs of non-space non-punctuation characters are words,
  // each ASCII punctuation char is its own token. Non-ASCII bytes count
  // as word characters, which keeps the character-conservation property
  // on UTF-8 input.
  std::vector<std::string> tokens;
  std::string word;
  auto flush_word = [&] {
    if (!word.empty()) {
      tokens.push_back(word);
      word.clear();
    }
  };
  for (const char c : text) {
    const unsigned char u = static_cast<unsigned char>(c);
    if (u < 0x80 && std::isspace(u)) {
      flush_word();
    } else if (u < 0x80 && std::ispunct(u)) {
      flush_word();
      tokens.push_back(std::string(1, c));
    } else {
      word.push_back(c);
    }
  }
  flush_word();

  std::vector<Sentence> sentences;
  Sentence current;
  current.source_id = source_id;
  auto flush_sentence = [&] {
    if (!current.tokens.empty()) {
      sentences.push_back(std::move(current));
      current = Sentence{};
      current.source_id = source_id;
    }
  };
  for (const std::string& t : tokens) {
    AnnotatedToken tok;
    tok.text = t;
    tok.lemma.reserve(t.size());
    for (const char c : t) {
      tok.lemma.push_back(static_cast<char>(
          std::tolower(static_cast<unsigned char>(c))));
    }
    tok.pos = "X";
    tok.dep = "dep";
    current.tokens.push_back(std::move(tok));
    if (t == "." || t == "!" || t == "?") flush_sentence();
  }
  flush_sentence();
  return sentences;
}

std::vector<BioTag> sentence_tags(const Sentence& sentence) {
  std::vector<BioTag> tags;
  tags.reserve(sentence.tokens.size());
  for (const AnnotatedToken& tok : sentence.tokens) {
    if (!tok.tag) {
      throw DataError("sentence '" + sentence.source_id +
                      "' has an untagged token: " + tok.text);
    }
    tags.push_back(*tok.tag);
  }
  return tags;
}

}  // namespace skillner
