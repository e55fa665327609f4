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

#include "skillner/mlp.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "skillner/error.hpp"
#include "skillner/text_format.hpp"

namespace skillner {

namespace {

// Embedding row feeding position j of a chunk: PAD when out of range or
// masked, so ids at masked positions are inert by construction.
int effective_id(const std::vector<int>& ids,
                 const std::vector<std::uint8_t>& mask, std::int64_t j) {
  if (j < 0 || j >= static_cast<std::int64_t>(ids.size())) {
    return WordVocab::kPadId;
  }
  return mask[j] ? ids[j] : WordVocab::kPadId;
}

// Concatenated window embeddings for the given positions.
Eigen::MatrixXd gather_inputs(const MlpModel& model,
                              const std::vector<int>& ids,
                              const std::vector<std::uint8_t>& mask,
                              const std::vector<std::size_t>& positions) {
  const int w = model.config.embed_window;
  const int d = model.config.embed_dim;
  Eigen::MatrixXd x(positions.size(), model.config.input_dim());
  for (std::size_t r = 0; r < positions.size(); ++r) {
    const std::int64_t p = static_cast<std::int64_t>(positions[r]);
    for (int o = -w; o <= w; ++o) {
      const int id = effective_id(ids, mask, p + o);
      if (id < 0 || id >= model.embeddings.rows()) {
        throw DataError("token id " + std::to_string(id) +
                        " out of vocab range");
      }
      x.block(r, (o + w) * d, 1, d) = model.embeddings.row(id);
    }
  }
  return x;
}

// Row-wise softmax with max-shift; finite for logits up to +-1e4 and beyond.
Eigen::MatrixXd softmax_rows(const Eigen::MatrixXd& logits) {
  Eigen::MatrixXd probs(logits.rows(), logits.cols());
  for (Eigen::Index r = 0; r < logits.rows(); ++r) {
    const double m = logits.row(r).maxCoeff();
    Eigen::RowVectorXd e = (logits.row(r).array() - m).exp();
    probs.row(r) = e / e.sum();
  }
  return probs;
}

void init_adam(AdamState& adam, const MlpModel& model) {
  adam.m_embed = Eigen::MatrixXd::Zero(model.embeddings.rows(),
                                       model.embeddings.cols());
  adam.v_embed = adam.m_embed;
  adam.m_hidden_w =
      Eigen::MatrixXd::Zero(model.hidden_w.rows(), model.hidden_w.cols());
  adam.v_hidden_w = adam.m_hidden_w;
  adam.m_output_w =
      Eigen::MatrixXd::Zero(model.output_w.rows(), model.output_w.cols());
  adam.v_output_w = adam.m_output_w;
  adam.m_hidden_b = Eigen::VectorXd::Zero(model.hidden_b.size());
  adam.v_hidden_b = adam.m_hidden_b;
  adam.m_output_b = Eigen::VectorXd::Zero(model.output_b.size());
  adam.v_output_b = adam.m_output_b;
  adam.step = 0;
}

void write_tensor(std::ostream& out, const std::string& name,
                  const Eigen::MatrixXd& tensor) {
  out << "tensor\t" << name << '\t' << tensor.rows() << '\t' << tensor.cols()
      << '\n';
  for (Eigen::Index r = 0; r < tensor.rows(); ++r) {
    for (Eigen::Index c = 0; c < tensor.cols(); ++c) {
      if (c > 0) out << '\t';
      out << fmt_double(tensor(r, c));
    }
    out << '\n';
  }
}

Eigen::MatrixXd read_tensor(std::istream& in, const std::string& expected) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("mlp model: truncated");
  std::istringstream header(line);
  std::string tag, name;
  Eigen::Index rows = 0, cols = 0;
  std::getline(header, tag, '\t');
  std::getline(header, name, '\t');
  header >> rows;
  header.ignore(1);
  header >> cols;
  if (tag != "tensor" || name != expected) {
    throw DataError("mlp model: expected tensor '" + expected + "', got '" +
                    line + "'");
  }
  Eigen::MatrixXd tensor(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    if (!std::getline(in, line)) throw DataError("mlp model: truncated");
    std::size_t begin = 0;
    for (Eigen::Index c = 0; c < cols; ++c) {
      std::size_t tab = line.find('\t', begin);
      if (tab == std::string::npos) tab = line.size();
      tensor(r, c) = parse_double(line.substr(begin, tab - begin));
      begin = tab + 1;
    }
  }
  return tensor;
}

}  // namespace

MlpModel init_mlp(const WordVocab& vocab, const MlpConfig& config) {
  if (config.embed_dim <= 0 || config.hidden <= 0 || config.max_len == 0 ||
      config.batch_size <= 0 || config.embed_window < 0 ||
      config.dropout < 0.0 || config.dropout >= 1.0) {
    throw DataError("invalid mlp configuration");
  }
  MlpModel model;
  model.vocab = vocab;
  model.config = config;
  Rng rng(config.seed);
  auto uniform_matrix = [&rng](Eigen::Index rows, Eigen::Index cols) {
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
      for (Eigen::Index c = 0; c < cols; ++c) {
        m(r, c) = rng.uniform(-0.05, 0.05);
      }
    }
    return m;
  };
  model.embeddings = uniform_matrix(static_cast<Eigen::Index>(vocab.size()),
                                    config.embed_dim);
  model.hidden_w = uniform_matrix(config.input_dim(), config.hidden);
  model.hidden_b = Eigen::VectorXd::Zero(config.hidden);
  model.output_w = uniform_matrix(config.hidden, kNumBioTags);
  model.output_b = Eigen::VectorXd::Zero(kNumBioTags);
  init_adam(model.adam, model);
  return model;
}

Eigen::MatrixXd forward(const MlpModel& model, const std::vector<int>& ids,
                        const std::vector<std::uint8_t>& mask, bool training,
                        Rng* rng) {
  if (ids.size() != model.config.max_len || mask.size() != ids.size()) {
    throw DataError("forward: ids/mask must have length max_len");
  }
  std::vector<std::size_t> positions(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) positions[i] = i;
  const Eigen::MatrixXd x = gather_inputs(model, ids, mask, positions);
  Eigen::MatrixXd h =
      ((x * model.hidden_w).rowwise() + model.hidden_b.transpose())
          .cwiseMax(0.0);
  if (training && model.config.dropout > 0.0) {
    if (rng == nullptr) {
      throw DataError("forward: training mode needs a random source");
    }
    const double keep = 1.0 - model.config.dropout;
    for (Eigen::Index r = 0; r < h.rows(); ++r) {
      for (Eigen::Index c = 0; c < h.cols(); ++c) {
        h(r, c) = rng->bernoulli(keep) ? h(r, c) / keep : 0.0;
      }
    }
  }
  const Eigen::MatrixXd logits =
      (h * model.output_w).rowwise() + model.output_b.transpose();
  return softmax_rows(logits);
}

double mlp_loss_and_gradients(const MlpModel& model, const MlpBatch& batch,
                              bool use_dropout, Rng* rng,
                              MlpGradients* grads) {
  if (batch.chunks.size() != batch.labels.size()) {
    throw DataError("batch chunks/labels size mismatch");
  }
  // Pack only the real (masked-in) positions of every chunk.
  struct Slot {
    std::size_t chunk;
    std::size_t pos;
    int label;
  };
  std::vector<Slot> slots;
  for (std::size_t c = 0; c < batch.chunks.size(); ++c) {
    const EncodedChunk& chunk = batch.chunks[c];
    for (std::size_t p = 0; p < chunk.mask.size(); ++p) {
      if (!chunk.mask[p]) continue;
      const int label = batch.labels[c][p];
      if (label < 0 || label >= kNumBioTags) {
        throw DataError("batch label out of range");
      }
      slots.push_back({c, p, label});
    }
  }
  if (slots.empty()) {
    if (grads) {
      grads->embed = Eigen::MatrixXd::Zero(model.embeddings.rows(),
                                           model.embeddings.cols());
      grads->hidden_w = Eigen::MatrixXd::Zero(model.hidden_w.rows(),
                                              model.hidden_w.cols());
      grads->hidden_b = Eigen::VectorXd::Zero(model.hidden_b.size());
      grads->output_w = Eigen::MatrixXd::Zero(model.output_w.rows(),
                                              model.output_w.cols());
      grads->output_b = Eigen::VectorXd::Zero(model.output_b.size());
    }
    return 0.0;
  }
  const double inv_m = 1.0 / static_cast<double>(slots.size());

  Eigen::MatrixXd x(slots.size(), model.config.input_dim());
  const int w = model.config.embed_window;
  const int d = model.config.embed_dim;
  for (std::size_t r = 0; r < slots.size(); ++r) {
    const EncodedChunk& chunk = batch.chunks[slots[r].chunk];
    const std::int64_t p = static_cast<std::int64_t>(slots[r].pos);
    for (int o = -w; o <= w; ++o) {
      const int id = effective_id(chunk.ids, chunk.mask, p + o);
      if (id < 0 || id >= model.embeddings.rows()) {
        throw DataError("token id out of vocab range");
      }
      x.block(r, (o + w) * d, 1, d) = model.embeddings.row(id);
    }
  }

  const Eigen::MatrixXd pre =
      (x * model.hidden_w).rowwise() + model.hidden_b.transpose();
  Eigen::MatrixXd h = pre.cwiseMax(0.0);

  Eigen::MatrixXd dropout_scale;
  if (use_dropout && model.config.dropout > 0.0) {
    if (rng == nullptr) throw DataError("dropout needs a random source");
    const double keep = 1.0 - model.config.dropout;
    dropout_scale.resize(h.rows(), h.cols());
    for (Eigen::Index r = 0; r < h.rows(); ++r) {
      for (Eigen::Index c = 0; c < h.cols(); ++c) {
        dropout_scale(r, c) = rng->bernoulli(keep) ? 1.0 / keep : 0.0;
      }
    }
    h = h.cwiseProduct(dropout_scale);
  }

  const Eigen::MatrixXd logits =
      (h * model.output_w).rowwise() + model.output_b.transpose();
  const Eigen::MatrixXd probs = softmax_rows(logits);

  double loss = 0.0;
  for (std::size_t r = 0; r < slots.size(); ++r) {
    // Clamp keeps the loss finite if a probability underflows to zero.
    loss -= std::log(std::max(probs(r, slots[r].label), 1e-300));
  }
  loss *= inv_m;
  if (grads == nullptr) return loss;

  Eigen::MatrixXd dlogits = probs;
  for (std::size_t r = 0; r < slots.size(); ++r) {
    dlogits(r, slots[r].label) -= 1.0;
  }
  dlogits *= inv_m;

  grads->output_w = h.transpose() * dlogits;
  grads->output_b = dlogits.colwise().sum();

  Eigen::MatrixXd dh = dlogits * model.output_w.transpose();
  if (dropout_scale.size() > 0) dh = dh.cwiseProduct(dropout_scale);
  const Eigen::MatrixXd dpre =
      dh.cwiseProduct((pre.array() > 0.0).cast<double>().matrix());

  grads->hidden_w = x.transpose() * dpre;
  grads->hidden_b = dpre.colwise().sum();

  const Eigen::MatrixXd dx = dpre * model.hidden_w.transpose();
  grads->embed = Eigen::MatrixXd::Zero(model.embeddings.rows(),
                                       model.embeddings.cols());
  for (std::size_t r = 0; r < slots.size(); ++r) {
    const EncodedChunk& chunk = batch.chunks[slots[r].chunk];
    const std::int64_t p = static_cast<std::int64_t>(slots[r].pos);
    for (int o = -w; o <= w; ++o) {
      const int id = effective_id(chunk.ids, chunk.mask, p + o);
      grads->embed.row(id) += dx.block(r, (o + w) * d, 1, d);
    }
  }
  return loss;
}

namespace {

void adam_update(Eigen::MatrixXd& theta, Eigen::MatrixXd& m,
                 Eigen::MatrixXd& v, const Eigen::MatrixXd& g,
                 const MlpConfig& cfg, double c1, double c2) {
  m = cfg.beta1 * m + (1.0 - cfg.beta1) * g;
  v = cfg.beta2 * v + (1.0 - cfg.beta2) * g.cwiseProduct(g);
  theta.array() -=
      cfg.alpha * (m.array() / c1) / ((v.array() / c2).sqrt() + cfg.epsilon);
}

void adam_update(Eigen::VectorXd& theta, Eigen::VectorXd& m,
                 Eigen::VectorXd& v, const Eigen::VectorXd& g,
                 const MlpConfig& cfg, double c1, double c2) {
  m = cfg.beta1 * m + (1.0 - cfg.beta1) * g;
  v = cfg.beta2 * v + (1.0 - cfg.beta2) * g.cwiseProduct(g);
  theta.array() -=
      cfg.alpha * (m.array() / c1) / ((v.array() / c2).sqrt() + cfg.epsilon);
}

}  // namespace

void adam_step(MlpModel& model, const MlpGradients& grads) {
  AdamState& adam = model.adam;
  adam.step += 1;
  const MlpConfig& cfg = model.config;
  const double c1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(adam.step));
  const double c2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(adam.step));
  adam_update(model.embeddings, adam.m_embed, adam.v_embed, grads.embed, cfg,
              c1, c2);
  adam_update(model.hidden_w, adam.m_hidden_w, adam.v_hidden_w, grads.hidden_w,
              cfg, c1, c2);
  adam_update(model.hidden_b, adam.m_hidden_b, adam.v_hidden_b, grads.hidden_b,
              cfg, c1, c2);
  adam_update(model.output_w, adam.m_output_w, adam.v_output_w, grads.output_w,
              cfg, c1, c2);
  adam_update(model.output_b, adam.m_output_b, adam.v_output_b, grads.output_b,
              cfg, c1, c2);
}

MlpModel train_mlp(const std::vector<Sentence>& corpus, const MlpConfig& config,
                   const std::string& annotator, std::ostream* log,
                   std::vector<double>* epoch_losses) {
  if (corpus.empty()) throw DataError("cannot train on an empty corpus");
  const WordVocab vocab = fit_word_vocab(corpus);
  MlpModel model = init_mlp(vocab, config);
  model.annotator = annotator;
  train_mlp_inplace(model, corpus, log, epoch_losses);
  return model;
}

void train_mlp_inplace(MlpModel& model, const std::vector<Sentence>& corpus,
                       std::ostream* log, std::vector<double>* epoch_losses) {
  if (corpus.empty()) throw DataError("cannot train on an empty corpus");
  const MlpConfig& config = model.config;
  const WordVocab& vocab = model.vocab;

  // Chunk every sentence once, with aligned labels.
  std::vector<EncodedChunk> chunks;
  std::vector<std::vector<int>> labels;
  for (const Sentence& sentence : corpus) {
    const std::vector<BioTag> tags = sentence_tags(sentence);
    for (EncodedChunk& chunk : encode_sequence(sentence, vocab,
                                               config.max_len)) {
      std::vector<int> chunk_labels(config.max_len, 0);
      for (std::size_t p = 0; p < config.max_len; ++p) {
        if (chunk.mask[p]) {
          chunk_labels[p] = static_cast<int>(tags[chunk.token_offset + p]);
        }
      }
      chunks.push_back(std::move(chunk));
      labels.push_back(std::move(chunk_labels));
    }
  }

  Rng shuffle_rng(config.seed + 1);
  Rng dropout_rng(config.seed + 2);
  std::vector<std::size_t> order(chunks.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    shuffle_rng.shuffle(order);
    double loss_sum = 0.0;
    std::size_t batches = 0;
    for (std::size_t begin = 0; begin < order.size();
         begin += static_cast<std::size_t>(config.batch_size)) {
      const std::size_t end =
          std::min(order.size(),
                   begin + static_cast<std::size_t>(config.batch_size));
      MlpBatch batch;
      for (std::size_t i = begin; i < end; ++i) {
        batch.chunks.push_back(chunks[order[i]]);
        batch.labels.push_back(labels[order[i]]);
      }
      MlpGradients grads;
      const double loss = mlp_loss_and_gradients(
          model, batch, config.dropout > 0.0, &dropout_rng, &grads);
      adam_step(model, grads);
      loss_sum += loss;
      ++batches;
    }
    if (epoch_losses) {
      epoch_losses->push_back(batches ? loss_sum / batches : 0.0);
    }
    if (log) {
      *log << "epoch " << (epoch + 1) << "/" << config.epochs
           << " mean loss " << (batches ? loss_sum / batches : 0.0) << "\n";
    }
  }
}

std::vector<BioTag> predict_tags_mlp(const MlpModel& model,
                                     const Sentence& sentence) {
  std::vector<BioTag> tags;
  tags.reserve(sentence.tokens.size());
  for (const EncodedChunk& chunk :
       encode_sequence(sentence, model.vocab, model.config.max_len)) {
    const Eigen::MatrixXd probs = forward(model, chunk.ids, chunk.mask);
    for (std::size_t p = 0; p < chunk.mask.size(); ++p) {
      if (!chunk.mask[p]) continue;
      int best = 0;
      for (int c = 1; c < kNumBioTags; ++c) {
        if (probs(p, c) > probs(p, best)) best = c;
      }
      tags.push_back(static_cast<BioTag>(best));
    }
  }
  return tags;
}

std::size_t load_pretrained_embeddings(MlpModel& model,
                                       const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open embedding file: " + path);
  std::string line;
  std::size_t loaded = 0;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string word;
    fields >> word;
    std::vector<double> values;
    std::string value;
    while (fields >> value) values.push_back(parse_double(value));
    if (static_cast<int>(values.size()) != model.config.embed_dim) {
      throw DataError(path + ":" + std::to_string(line_no) + ": expected " +
                      std::to_string(model.config.embed_dim) + " values");
    }
    const int id = model.vocab.id(word);
    if (id == WordVocab::kUnkId && word != "<UNK>") continue;
    for (int c = 0; c < model.config.embed_dim; ++c) {
      model.embeddings(id, c) = values[c];
    }
    ++loaded;
  }
  return loaded;
}

void save_mlp(const MlpModel& model, std::ostream& out) {
  out << "skillner-mlp 1\n";
  out << "annotator\t" << model.annotator << '\n';
  const MlpConfig& c = model.config;
  out << "config\t" << c.embed_dim << '\t' << c.hidden << '\t'
      << c.embed_window << '\t' << c.max_len << '\t' << c.batch_size << '\t'
      << c.epochs << '\t' << fmt_double(c.dropout) << '\t'
      << fmt_double(c.alpha) << '\t' << fmt_double(c.beta1) << '\t'
      << fmt_double(c.beta2) << '\t' << fmt_double(c.epsilon) << '\t'
      << c.seed << '\n';
  model.vocab.save(out);
  write_tensor(out, "embeddings", model.embeddings);
  write_tensor(out, "hidden_w", model.hidden_w);
  write_tensor(out, "hidden_b", model.hidden_b);
  write_tensor(out, "output_w", model.output_w);
  write_tensor(out, "output_b", model.output_b);
}

void save_mlp(const MlpModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write model file: " + path);
  save_mlp(model, out);
  if (!out) throw DataError("short write on model file: " + path);
}

MlpModel load_mlp(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "skillner-mlp 1") {
    throw DataError("not a skillner mlp model file");
  }
  MlpModel model;
  if (!std::getline(in, line) || line.rfind("annotator\t", 0) != 0) {
    throw DataError("mlp model: missing annotator line");
  }
  model.annotator = line.substr(10);
  if (!std::getline(in, line) || line.rfind("config\t", 0) != 0) {
    throw DataError("mlp model: missing config line");
  }
  {
    std::istringstream fields(line.substr(7));
    MlpConfig& c = model.config;
    std::string dropout, alpha, beta1, beta2, epsilon;
    fields >> c.embed_dim >> c.hidden >> c.embed_window >> c.max_len >>
        c.batch_size >> c.epochs >> dropout >> alpha >> beta1 >> beta2 >>
        epsilon >> c.seed;
    c.dropout = parse_double(dropout);
    c.alpha = parse_double(alpha);
    c.beta1 = parse_double(beta1);
    c.beta2 = parse_double(beta2);
    c.epsilon = parse_double(epsilon);
  }
  model.vocab = WordVocab::load(in);
  model.embeddings = read_tensor(in, "embeddings");
  model.hidden_w = read_tensor(in, "hidden_w");
  model.hidden_b = read_tensor(in, "hidden_b");
  model.output_w = read_tensor(in, "output_w");
  model.output_b = read_tensor(in, "output_b");
  init_adam(model.adam, model);
  return model;
}

MlpModel load_mlp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open model file: " + path);
  return load_mlp(in);
}

}  // namespace skillner
