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

#ifndef SKILLNER_SVM_HPP_
#define SKILLNER_SVM_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "skillner/corpus.hpp"
#include "skillner/features.hpp"

namespace skillner {

/// Sparse feature vector: parallel (column, value) arrays, columns sorted.
struct SparseFeatures {
  std::vector<std::int64_t> columns;
  std::vector<double> values;

  double dot(const Eigen::VectorXd& w) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < columns.size(); ++i) {
      sum += w[columns[i]] * values[i];
    }
    return sum;
  }
};

struct SvmConfig {
  double c = 1.0;       // hinge/regularization trade-off
  int epochs = 20;
  std::uint64_t seed = 42;
  int window = 2;       // feature context half-width
};

/// One-vs-rest linear machines over the BIO label set, with the feature
/// vocabulary baked in so saved models reproduce scores exactly.
struct LinearSvmModel {
  FeatureVocab vocab;
  std::vector<Eigen::VectorXd> weights;  // one vector per label
  std::vector<double> biases;
  SvmConfig config;
  std::string annotator;  // provenance of the training corpus
};

/// Per-example regularized objective f(w, b) = (lambda/2)|w|^2 +
/// max(0, 1 - y(w.x + b)), the function whose subgradient drives each
/// Pegasos step. y is +1 or -1; the bias is unregularized.
double example_objective(const Eigen::VectorXd& w, double b,
                         const SparseFeatures& x, int y, double lambda);

/// Subgradient of example_objective (the margin-1 kink resolves to the
/// margin < 1 branch).
void example_subgradient(const Eigen::VectorXd& w, double b,
                         const SparseFeatures& x, int y, double lambda,
                         Eigen::VectorXd* grad_w, double* grad_b);

/// Full binary objective (1/2)|w|^2 + C * sum_i hinge_i for reporting and
/// oracle comparison. labels hold +1/-1.
double svm_objective(const Eigen::VectorXd& w, double b,
                     const std::vector<SparseFeatures>& xs,
                     const std::vector<int>& labels, double c);

struct MulticlassWeights {
  std::vector<Eigen::VectorXd> w;
  std::vector<double> b;
};

/// Pegasos-style subgradient descent, one binary machine per class, all
/// machines sharing the seeded visit order and the step schedule
/// eta_t = 1/(lambda t) with lambda = 1/(C n). Classes absent from ys keep
/// zero weights (a warning goes to `log` when given). When
/// `epoch_objectives` is non-null it receives, per epoch, the sum of the
/// per-class full objectives.
MulticlassWeights train_pegasos(const std::vector<SparseFeatures>& xs,
                                const std::vector<int>& ys, std::int64_t dim,
                                int num_classes, const SvmConfig& config,
                                std::ostream* log = nullptr,
                                std::vector<double>* epoch_objectives = nullptr);

/// Token tagger on windowed categorical features. The corpus must be fully
/// tagged. Deterministic: same corpus, config and seed give identical
/// serialized bytes.
LinearSvmModel train_svm(const std::vector<Sentence>& corpus,
                         const SvmConfig& config,
                         const std::string& annotator = "",
                         std::ostream* log = nullptr);

std::vector<double> svm_scores(const LinearSvmModel& model,
                               const Sentence& sentence, std::size_t index);

/// Per-token argmax over one-vs-rest scores; ties resolve to the lower
/// label index, so O wins an exact tie.
std::vector<BioTag> predict_tags_svm(const LinearSvmModel& model,
                                     const Sentence& sentence);

void save_svm(const LinearSvmModel& model, const std::string& path);
LinearSvmModel load_svm(const std::string& path);

void save_svm(const LinearSvmModel& model, std::ostream& out);
LinearSvmModel load_svm(std::istream& in);

}  // namespace skillner

#endif  // SKILLNER_SVM_HPP_
