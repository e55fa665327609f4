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

#include "skillner/svm.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include "skillner/error.hpp"
#include "skillner/rng.hpp"
#include "skillner/text_format.hpp"

namespace skillner {

namespace {

// w represented as scale * direction so the regularization shrink is O(1)
// per step and only active columns are touched.
struct ScaledVector {
  double scale = 1.0;
  Eigen::VectorXd direction;

  explicit ScaledVector(std::int64_t dim)
      : direction(Eigen::VectorXd::Zero(dim)) {}

  double dot(const SparseFeatures& x) const { return scale * x.dot(direction); }

  void shrink(double factor) {
    if (factor == 0.0) {
      direction.setZero();
      scale = 1.0;
      return;
    }
    scale *= factor;
    if (scale < 1e-6) {
      direction *= scale;
      scale = 1.0;
    }
  }

  void add(const SparseFeatures& x, double coefficient) {
    const double c = coefficient / scale;
    for (std::size_t i = 0; i < x.columns.size(); ++i) {
      direction[x.columns[i]] += c * x.values[i];
    }
  }

  Eigen::VectorXd materialize() const { return scale * direction; }
};

}  // namespace

double example_objective(const Eigen::VectorXd& w, double b,
                         const SparseFeatures& x, int y, double lambda) {
  const double margin = y * (x.dot(w) + b);
  const double hinge = margin < 1.0 ? 1.0 - margin : 0.0;
  return 0.5 * lambda * w.squaredNorm() + hinge;
}

void example_subgradient(const Eigen::VectorXd& w, double b,
                         const SparseFeatures& x, int y, double lambda,
                         Eigen::VectorXd* grad_w, double* grad_b) {
  *grad_w = lambda * w;
  *grad_b = 0.0;
  const double margin = y * (x.dot(w) + b);
  if (margin < 1.0) {
    for (std::size_t i = 0; i < x.columns.size(); ++i) {
      (*grad_w)[x.columns[i]] -= y * x.values[i];
    }
    *grad_b = -y;
  }
}

double svm_objective(const Eigen::VectorXd& w, double b,
                     const std::vector<SparseFeatures>& xs,
                     const std::vector<int>& labels, double c) {
  double hinge_sum = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double margin = labels[i] * (xs[i].dot(w) + b);
    if (margin < 1.0) hinge_sum += 1.0 - margin;
  }
  return 0.5 * w.squaredNorm() + c * hinge_sum;
}

MulticlassWeights train_pegasos(const std::vector<SparseFeatures>& xs,
                                const std::vector<int>& ys, std::int64_t dim,
                                int num_classes, const SvmConfig& config,
                                std::ostream* log,
                                std::vector<double>* epoch_objectives) {
  if (xs.empty()) throw DataError("no training examples");
  if (xs.size() != ys.size()) throw DataError("examples/labels size mismatch");
  const std::size_t n = xs.size();
  const double lambda = 1.0 / (config.c * static_cast<double>(n));

  std::vector<bool> present(num_classes, false);
  for (const int y : ys) present[y] = true;
  if (log) {
    for (int c = 0; c < num_classes; ++c) {
      if (!present[c]) {
        *log << "warning: class " << c
             << " absent from training data; its weights stay zero\n";
      }
    }
  }

  std::vector<ScaledVector> w(num_classes, ScaledVector(dim));
  std::vector<double> b(num_classes, 0.0);

  Rng rng(config.seed);
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;

  double t = 0.0;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(order);
    for (const std::size_t i : order) {
      t += 1.0;
      const double eta = 1.0 / (lambda * t);
      const SparseFeatures& x = xs[i];
      for (int c = 0; c < num_classes; ++c) {
        if (!present[c]) continue;
        const int y = ys[i] == c ? +1 : -1;
        const double margin = y * (w[c].dot(x) + b[c]);
        w[c].shrink(1.0 - eta * lambda);  // equals (1 - 1/t)
        if (margin < 1.0) {
          w[c].add(x, eta * y);
          b[c] += eta * y;
        }
      }
    }
    if (epoch_objectives) {
      double total = 0.0;
      for (int c = 0; c < num_classes; ++c) {
        const Eigen::VectorXd wc = w[c].materialize();
        std::vector<int> bin(n);
        for (std::size_t i = 0; i < n; ++i) bin[i] = ys[i] == c ? +1 : -1;
        total += svm_objective(wc, b[c], xs, bin, config.c);
      }
      epoch_objectives->push_back(total);
    }
  }

  MulticlassWeights out;
  out.w.reserve(num_classes);
  for (int c = 0; c < num_classes; ++c) out.w.push_back(w[c].materialize());
  out.b = b;
  return out;
}

LinearSvmModel train_svm(const std::vector<Sentence>& corpus,
                         const SvmConfig& config, const std::string& annotator,
                         std::ostream* log) {
  if (corpus.empty()) throw DataError("cannot train on an empty corpus");

  LinearSvmModel model;
  model.config = config;
  model.annotator = annotator;
  model.vocab = fit_vocab(corpus, config.window);

  std::vector<SparseFeatures> xs;
  std::vector<int> ys;
  for (const Sentence& sentence : corpus) {
    const std::vector<BioTag> tags = sentence_tags(sentence);
    for (std::size_t i = 0; i < sentence.tokens.size(); ++i) {
      SparseFeatures x;
      x.columns = vectorize_token(sentence, i, model.vocab);
      x.values.assign(x.columns.size(), 1.0);
      xs.push_back(std::move(x));
      ys.push_back(static_cast<int>(tags[i]));
    }
  }

  MulticlassWeights trained =
      train_pegasos(xs, ys, static_cast<std::int64_t>(model.vocab.size()),
                    kNumBioTags, config, log);
  model.weights = std::move(trained.w);
  model.biases = std::move(trained.b);
  return model;
}

std::vector<double> svm_scores(const LinearSvmModel& model,
                               const Sentence& sentence, std::size_t index) {
  SparseFeatures x;
  x.columns = vectorize_token(sentence, index, model.vocab);
  x.values.assign(x.columns.size(), 1.0);
  std::vector<double> scores(model.weights.size());
  for (std::size_t c = 0; c < model.weights.size(); ++c) {
    scores[c] = x.dot(model.weights[c]) + model.biases[c];
  }
  return scores;
}

std::vector<BioTag> predict_tags_svm(const LinearSvmModel& model,
                                     const Sentence& sentence) {
  std::vector<BioTag> tags;
  tags.reserve(sentence.tokens.size());
  for (std::size_t i = 0; i < sentence.tokens.size(); ++i) {
    const std::vector<double> scores = svm_scores(model, sentence, i);
    int best = 0;
    for (int c = 1; c < static_cast<int>(scores.size()); ++c) {
      if (scores[c] > scores[best]) best = c;
    }
    tags.push_back(static_cast<BioTag>(best));
  }
  return tags;
}

void save_svm(const LinearSvmModel& model, std::ostream& out) {
  out << "skillner-svm 1\n";
  out << "annotator\t" << model.annotator << '\n';
  out << "config\t" << fmt_double(model.config.c) << '\t'
      << model.config.epochs << '\t' << model.config.seed << '\t'
      << model.config.window << '\n';
  model.vocab.save(out);
  for (std::size_t c = 0; c < model.weights.size(); ++c) {
    const Eigen::VectorXd& w = model.weights[c];
    std::int64_t nonzeros = 0;
    for (std::int64_t j = 0; j < w.size(); ++j) {
      if (w[j] != 0.0) ++nonzeros;
    }
    out << "weights\t" << c << '\t' << nonzeros << '\n';
    for (std::int64_t j = 0; j < w.size(); ++j) {
      if (w[j] != 0.0) out << j << '\t' << fmt_double(w[j]) << '\n';
    }
    out << "bias\t" << c << '\t' << fmt_double(model.biases[c]) << '\n';
  }
}

void save_svm(const LinearSvmModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write model file: " + path);
  save_svm(model, out);
  if (!out) throw DataError("short write on model file: " + path);
}

LinearSvmModel load_svm(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "skillner-svm 1") {
    throw DataError("not a skillner svm model file");
  }
  LinearSvmModel model;

  if (!std::getline(in, line) || line.rfind("annotator\t", 0) != 0) {
    throw DataError("svm model: missing annotator line");
  }
  model.annotator = line.substr(10);

  if (!std::getline(in, line) || line.rfind("config\t", 0) != 0) {
    throw DataError("svm model: missing config line");
  }
  {
    std::istringstream fields(line.substr(7));
    std::string c_text;
    fields >> c_text >> model.config.epochs >> model.config.seed >>
        model.config.window;
    model.config.c = parse_double(c_text);
  }

  model.vocab = FeatureVocab::load(in);
  const std::int64_t dim = static_cast<std::int64_t>(model.vocab.size());
  model.weights.assign(kNumBioTags, Eigen::VectorXd::Zero(dim));
  model.biases.assign(kNumBioTags, 0.0);

  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.rfind("weights\t", 0) == 0) {
      std::istringstream header(line.substr(8));
      int label = 0;
      std::int64_t count = 0;
      header >> label >> count;
      if (label < 0 || label >= kNumBioTags) {
        throw DataError("svm model: bad label index");
      }
      for (std::int64_t i = 0; i < count; ++i) {
        if (!std::getline(in, line)) throw DataError("svm model: truncated");
        const std::size_t tab = line.find('\t');
        const std::int64_t col = std::stoll(line.substr(0, tab));
        if (col < 0 || col >= dim) throw DataError("svm model: bad column");
        model.weights[label][col] = parse_double(line.substr(tab + 1));
      }
    } else if (line.rfind("bias\t", 0) == 0) {
      std::istringstream header(line.substr(5));
      int label = 0;
      std::string value;
      header >> label >> value;
      if (label < 0 || label >= kNumBioTags) {
        throw DataError("svm model: bad label index");
      }
      model.biases[label] = parse_double(value);
    } else {
      throw DataError("svm model: unexpected line: " + line);
    }
  }
  return model;
}

LinearSvmModel load_svm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open model file: " + path);
  return load_svm(in);
}

}  // namespace skillner
