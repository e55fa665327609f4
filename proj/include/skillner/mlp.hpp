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

#ifndef SKILLNER_MLP_HPP_
#define SKILLNER_MLP_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "skillner/corpus.hpp"
#include "skillner/features.hpp"
#include "skillner/rng.hpp"

namespace skillner {

struct MlpConfig {
  int embed_dim = 50;
  int hidden = 64;
  int embed_window = 1;  // token input = embeddings of positions [-w, +w]
  std::size_t max_len = 50;
  int batch_size = 128;
  int epochs = 20;
  double dropout = 0.5;
  double alpha = 1e-3;  // Adam step size
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::uint64_t seed = 42;

  int input_dim() const { return (2 * embed_window + 1) * embed_dim; }
};

/// Adam first/second moments plus the step counter; lives with the model so
/// training can resume, but is not serialized.
struct AdamState {
  Eigen::MatrixXd m_embed, v_embed, m_hidden_w, v_hidden_w, m_output_w,
      v_output_w;
  Eigen::VectorXd m_hidden_b, v_hidden_b, m_output_b, v_output_b;
  long step = 0;
};

/// Time-distributed tagger: the same embedding -> dense(ReLU) -> dropout ->
/// softmax stack applied independently at every token position. A token's
/// input is the concatenation of the embeddings in its +-embed_window
/// neighborhood; positions outside the sentence (or masked) contribute the
/// PAD embedding.
struct MlpModel {
  WordVocab vocab;
  Eigen::MatrixXd embeddings;  // vocab_size x embed_dim
  Eigen::MatrixXd hidden_w;    // input_dim x hidden
  Eigen::VectorXd hidden_b;    // hidden
  Eigen::MatrixXd output_w;    // hidden x kNumBioTags
  Eigen::VectorXd output_b;    // kNumBioTags
  MlpConfig config;
  std::string annotator;
  AdamState adam;
};

/// Fresh model with seeded uniform(-0.05, 0.05) parameters and zero biases.
MlpModel init_mlp(const WordVocab& vocab, const MlpConfig& config);

/// Per-token probability rows (max_len x 3); every row sums to 1. Rows are
/// produced for masked positions too, but ids at masked positions never
/// influence any row: the window lookup routes them to PAD. Dropout (with
/// inverted scaling) applies only when training = true, drawing from `rng`.
Eigen::MatrixXd forward(const MlpModel& model, const std::vector<int>& ids,
                        const std::vector<std::uint8_t>& mask,
                        bool training = false, Rng* rng = nullptr);

/// One training batch: encoded chunks with aligned per-position labels
/// (entries at masked positions are ignored).
struct MlpBatch {
  std::vector<EncodedChunk> chunks;
  std::vector<std::vector<int>> labels;
};

struct MlpGradients {
  Eigen::MatrixXd embed, hidden_w, output_w;
  Eigen::VectorXd hidden_b, output_b;
};

/// Masked mean cross-entropy over the batch, and (when grads is non-null)
/// its gradient for every parameter tensor. The finite-difference checks
/// run against exactly this function with dropout off.
double mlp_loss_and_gradients(const MlpModel& model, const MlpBatch& batch,
                              bool use_dropout, Rng* rng,
                              MlpGradients* grads);

/// Adam with the standard bias-corrected moment estimates.
void adam_step(MlpModel& model, const MlpGradients& grads);

/// Trains on a fully tagged corpus: seeded shuffling, fixed batch size,
/// dense Adam updates. Deterministic for a fixed seed. When
/// `epoch_losses` is non-null it receives the mean training loss per epoch.
MlpModel train_mlp(const std::vector<Sentence>& corpus,
                   const MlpConfig& config, const std::string& annotator = "",
                   std::ostream* log = nullptr,
                   std::vector<double>* epoch_losses = nullptr);

/// Same training loop on an already initialized model (e.g. after
/// load_pretrained_embeddings). The model's vocab must cover the corpus the
/// way init_mlp + fit_word_vocab would have built it.
void train_mlp_inplace(MlpModel& model, const std::vector<Sentence>& corpus,
                       std::ostream* log = nullptr,
                       std::vector<double>* epoch_losses = nullptr);

/// Per-token argmax of the softmax rows; chunked sentences are reassembled
/// and masked rows dropped. Ties resolve to the lower label index.
std::vector<BioTag> predict_tags_mlp(const MlpModel& model,
                                     const Sentence& sentence);

/// Overwrites embedding rows from a text file of lines "word v1 ... vD"
/// (D = embed_dim); words missing from the vocab are skipped. Returns the
/// number of rows loaded.
std::size_t load_pretrained_embeddings(MlpModel& model,
                                       const std::string& path);

void save_mlp(const MlpModel& model, const std::string& path);
MlpModel load_mlp(const std::string& path);

void save_mlp(const MlpModel& model, std::ostream& out);
MlpModel load_mlp(std::istream& in);

}  // namespace skillner

#endif  // SKILLNER_MLP_HPP_
