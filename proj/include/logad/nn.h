//
// Copyright 2026 The logad Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef LOGAD_NN_H_
#define LOGAD_NN_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace logad::nn {

// Dense row-major array of doubles.
struct Tensor {
  std::vector<std::size_t> shape;
  std::vector<double> data;

  Tensor() = default;
  explicit Tensor(std::vector<std::size_t> shape_in, double fill = 0.0);

  std::size_t size() const { return data.size(); }
  std::size_t rows() const { return shape.empty() ? 0 : shape[0]; }
  std::size_t cols() const { return shape.size() < 2 ? 1 : shape[1]; }

  bool operator==(const Tensor&) const = default;
};

enum class Objective { kClassification, kRegression };

std::string_view ObjectiveName(Objective objective);
Objective ParseObjective(std::string_view name);

struct ModelConfig {
  std::size_t embed_dim = 0;
  std::size_t hidden_size = 128;
  std::size_t window = 10;
  std::size_t num_classes = 0;  // classification only
  Objective objective = Objective::kClassification;

  std::size_t output_dim() const {
    return objective == Objective::kClassification ? num_classes : embed_dim;
  }
  // Throws kConfigError.
  void Validate() const;

  bool operator==(const ModelConfig&) const = default;
};

// One LSTM direction. Gate rows are stacked in the order input, forget,
// candidate, output.
struct LstmCellParams {
  Tensor w_input;   // 4h x d
  Tensor w_hidden;  // 4h x h
  Tensor bias;      // 4h

  bool operator==(const LstmCellParams&) const = default;
};

struct BiLstmParams {
  LstmCellParams forward;
  LstmCellParams backward;
  Tensor head1_w;  // h x 2h
  Tensor head1_b;  // h
  Tensor head2_w;  // out x h
  Tensor head2_b;  // out

  static BiLstmParams Zeros(const ModelConfig& config);
  // Uniform in +-1/sqrt(fan_in); forget-gate bias starts at +1.
  static BiLstmParams Init(const ModelConfig& config, std::uint64_t seed);

  template <typename F>
  void ForEach(F&& fn) {
    fn("fwd.w_input", forward.w_input);
    fn("fwd.w_hidden", forward.w_hidden);
    fn("fwd.bias", forward.bias);
    fn("bwd.w_input", backward.w_input);
    fn("bwd.w_hidden", backward.w_hidden);
    fn("bwd.bias", backward.bias);
    fn("head1.w", head1_w);
    fn("head1.b", head1_b);
    fn("head2.w", head2_w);
    fn("head2.b", head2_b);
  }
  template <typename F>
  void ForEach(F&& fn) const {
    const_cast<BiLstmParams*>(this)->ForEach(
        [&fn](std::string_view name, const Tensor& t) { fn(name, t); });
  }

  bool operator==(const BiLstmParams&) const = default;
};

struct CellState {
  std::vector<double> h;
  std::vector<double> c;
};

// One recurrence step. Throws kShapeMismatch or kNumericError (non-finite input).
CellState LstmCellStep(const LstmCellParams& cell, std::span<const double> x,
                       std::span<const double> h_prev, std::span<const double> c_prev);

// Concatenated final forward and backward hidden states (length 2h) for a
// window of config.window rows of config.embed_dim values (row-major).
std::vector<double> BiLstmForward(const BiLstmParams& params, const ModelConfig& config,
                                  std::span<const double> window);

// linear -> tanh -> linear, then softmax (classification) or identity.
std::vector<double> HeadForward(const BiLstmParams& params, std::span<const double> z,
                                const ModelConfig& config);

std::vector<double> Softmax(std::span<const double> logits);

double CrossEntropy(std::span<const double> probabilities, std::size_t target_class);
double MeanSquaredError(std::span<const double> prediction, std::span<const double> target);

// A training example. `inputs` is window x embed_dim, row-major.
struct Example {
  std::span<const double> inputs;
  std::size_t target_class = 0;
  std::span<const double> target_embedding;
};

// Loss of one prediction under the configured objective.
double Loss(const ModelConfig& config, std::span<const double> prediction,
            const Example& target);

// Full forward pass over a batch. Returns one output vector per example.
std::vector<std::vector<double>> PredictBatch(const BiLstmParams& params,
                                              const ModelConfig& config,
                                              std::span<const Example> batch);

// Mean loss over the batch; when `grads` is non-null it receives the exact
// gradient of that mean w.r.t. every parameter (overwritten, same shapes).
double LossAndGradient(const BiLstmParams& params, const ModelConfig& config,
                       std::span<const Example> batch, BiLstmParams* grads);

// Single-window gradient.
BiLstmParams Backward(const BiLstmParams& params, const ModelConfig& config,
                      const Example& example);

enum class OptimizerKind { kAdam, kSgd };

struct OptimizerState {
  OptimizerKind kind = OptimizerKind::kAdam;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::int64_t step = 0;
  BiLstmParams first_moment;
  BiLstmParams second_moment;
};

OptimizerState MakeOptimizer(OptimizerKind kind, const ModelConfig& config);
void OptimizerStep(BiLstmParams& params, const BiLstmParams& grads, OptimizerState& state,
                   double learning_rate);

double GradientNorm(const BiLstmParams& grads);
void ScaleGradients(BiLstmParams& grads, double factor);

struct Checkpoint {
  ModelConfig config;
  BiLstmParams params;
  std::string meta_json = "{}";  // opaque to this module
};

// Magic, JSON header (config + meta), then named tensors as
// name, shape, little-endian float64 values.
void SaveCheckpoint(const Checkpoint& checkpoint, const std::filesystem::path& path);
Checkpoint LoadCheckpoint(const std::filesystem::path& path);
// Throws kFormatError if the stored config differs from `expected`.
Checkpoint LoadCheckpoint(const std::filesystem::path& path, const ModelConfig& expected);

}  // namespace logad::nn

#endif  // LOGAD_NN_H_
