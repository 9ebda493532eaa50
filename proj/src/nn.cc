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

#include "logad/nn.h"

#include <Eigen/Dense>
#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

#include "json.hpp"
#include "logad/error.h"
#include "logad/io_util.h"
#include "logad/random.h"

namespace logad::nn {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::Map<const RowMat> Mat(const Tensor& t) {
  return {t.data.data(), static_cast<Eigen::Index>(t.rows()),
          static_cast<Eigen::Index>(t.cols())};
}
Eigen::Map<RowMat> Mat(Tensor& t) {
  return {t.data.data(), static_cast<Eigen::Index>(t.rows()),
          static_cast<Eigen::Index>(t.cols())};
}
Eigen::Map<const VectorXd> Vec(const Tensor& t) {
  return {t.data.data(), static_cast<Eigen::Index>(t.size())};
}
Eigen::Map<VectorXd> Vec(Tensor& t) {
  return {t.data.data(), static_cast<Eigen::Index>(t.size())};
}

MatrixXd Sigmoid(const MatrixXd& x) {
  return (1.0 / (1.0 + (-x.array()).exp())).matrix();
}

void RequireFinite(std::span<const double> values, const char* what) {
  for (double v : values) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kNumericError, std::string("non-finite ") + what);
  }
}

// Activations of one direction over the whole window. Index s is the
// processing step; h[s] / c[s] hold the state *before* step s.
struct DirectionCache {
  std::vector<MatrixXd> gates;  // 4h x B, activated
  std::vector<MatrixXd> h;      // window + 1 entries
  std::vector<MatrixXd> c;
};

struct ForwardPass {
  std::vector<MatrixXd> inputs;  // window entries of d x B
  DirectionCache fwd;
  DirectionCache bwd;
  MatrixXd z;       // 2h x B
  MatrixXd hidden;  // tanh(head1), h x B
  MatrixXd out;     // out_dim x B; probabilities for classification
};

std::size_t InputIndex(std::size_t step, std::size_t window, bool forward) {
  return forward ? step : window - 1 - step;
}

void RunDirection(const LstmCellParams& cell, const std::vector<MatrixXd>& inputs,
                  bool forward, Eigen::Index hidden, DirectionCache& cache) {
  const Eigen::Index batch = inputs.front().cols();
  const std::size_t window = inputs.size();
  const auto wx = Mat(cell.w_input);
  const auto wh = Mat(cell.w_hidden);
  const auto b = Vec(cell.bias);
  cache.gates.resize(window);
  cache.h.assign(window + 1, MatrixXd::Zero(hidden, batch));
  cache.c.assign(window + 1, MatrixXd::Zero(hidden, batch));
  for (std::size_t s = 0; s < window; ++s) {
    const MatrixXd& x = inputs[InputIndex(s, window, forward)];
    MatrixXd a = wx * x + wh * cache.h[s];
    a.colwise() += b;
    MatrixXd& g = cache.gates[s];
    g.resize(4 * hidden, batch);
    g.topRows(2 * hidden) = Sigmoid(a.topRows(2 * hidden));
    g.middleRows(2 * hidden, hidden) = a.middleRows(2 * hidden, hidden).array().tanh().matrix();
    g.bottomRows(hidden) = Sigmoid(a.bottomRows(hidden));
    const auto gi = g.topRows(hidden).array();
    const auto gf = g.middleRows(hidden, hidden).array();
    const auto gg = g.middleRows(2 * hidden, hidden).array();
    const auto go = g.bottomRows(hidden).array();
    cache.c[s + 1] = (gf * cache.c[s].array() + gi * gg).matrix();
    cache.h[s + 1] = (go * cache.c[s + 1].array().tanh()).matrix();
  }
}

void ValidateBatch(const ModelConfig& config, std::span<const Example> batch) {
  const std::size_t expected = config.window * config.embed_dim;
  for (const Example& ex : batch) {
    if (ex.inputs.size() != expected) {
      throw Error(ErrorCode::kShapeMismatch, "window has " + std::to_string(ex.inputs.size()) +
                                                 " values, expected " + std::to_string(expected));
    }
    RequireFinite(ex.inputs, "window input");
  }
}

ForwardPass RunForward(const BiLstmParams& params, const ModelConfig& config,
                       std::span<const Example> batch) {
  ValidateBatch(config, batch);
  const auto batch_size = static_cast<Eigen::Index>(batch.size());
  const auto d = static_cast<Eigen::Index>(config.embed_dim);
  const auto h = static_cast<Eigen::Index>(config.hidden_size);
  ForwardPass pass;
  pass.inputs.assign(config.window, MatrixXd(d, batch_size));
  for (Eigen::Index col = 0; col < batch_size; ++col) {
    const double* src = batch[static_cast<std::size_t>(col)].inputs.data();
    for (std::size_t t = 0; t < config.window; ++t) {
      pass.inputs[t].col(col) = Eigen::Map<const VectorXd>(src + t * config.embed_dim, d);
    }
  }
  RunDirection(params.forward, pass.inputs, true, h, pass.fwd);
  RunDirection(params.backward, pass.inputs, false, h, pass.bwd);
  pass.z.resize(2 * h, batch_size);
  pass.z.topRows(h) = pass.fwd.h.back();
  pass.z.bottomRows(h) = pass.bwd.h.back();

  MatrixXd a1 = Mat(params.head1_w) * pass.z;
  a1.colwise() += Vec(params.head1_b);
  pass.hidden = a1.array().tanh().matrix();
  pass.out = Mat(params.head2_w) * pass.hidden;
  pass.out.colwise() += Vec(params.head2_b);
  if (config.objective == Objective::kClassification) {
    for (Eigen::Index col = 0; col < batch_size; ++col) {
      const double m = pass.out.col(col).maxCoeff();
      pass.out.col(col) = (pass.out.col(col).array() - m).exp().matrix();
      pass.out.col(col) /= pass.out.col(col).sum();
    }
  }
  return pass;
}

void BackpropDirection(const LstmCellParams& cell, const DirectionCache& cache,
                       const std::vector<MatrixXd>& inputs, bool forward, MatrixXd d_h,
                       LstmCellParams& grad) {
  const Eigen::Index h = d_h.rows();
  const Eigen::Index batch = d_h.cols();
  const std::size_t window = inputs.size();
  const auto wh = Mat(cell.w_hidden);
  auto g_wx = Mat(grad.w_input);
  auto g_wh = Mat(grad.w_hidden);
  auto g_b = Vec(grad.bias);
  MatrixXd d_c = MatrixXd::Zero(h, batch);
  MatrixXd d_a(4 * h, batch);
  for (std::size_t s = window; s-- > 0;) {
    const MatrixXd& g = cache.gates[s];
    const auto gi = g.topRows(h).array();
    const auto gf = g.middleRows(h, h).array();
    const auto gg = g.middleRows(2 * h, h).array();
    const auto go = g.bottomRows(h).array();
    const Eigen::ArrayXXd tanh_c = cache.c[s + 1].array().tanh();
    d_c.array() += d_h.array() * go * (1.0 - tanh_c.square());
    d_a.topRows(h) = (d_c.array() * gg * gi * (1.0 - gi)).matrix();
    d_a.middleRows(h, h) = (d_c.array() * cache.c[s].array() * gf * (1.0 - gf)).matrix();
    d_a.middleRows(2 * h, h) = (d_c.array() * gi * (1.0 - gg.square())).matrix();
    d_a.bottomRows(h) = (d_h.array() * tanh_c * go * (1.0 - go)).matrix();
    g_wx.noalias() += d_a * inputs[InputIndex(s, window, forward)].transpose();
    g_wh.noalias() += d_a * cache.h[s].transpose();
    g_b += d_a.rowwise().sum();
    d_h.noalias() = wh.transpose() * d_a;
    d_c.array() *= gf;
  }
}

Tensor UniformTensor(std::vector<std::size_t> shape, double bound, Rng& rng) {
  Tensor t(std::move(shape));
  for (double& x : t.data) x = rng.uniform(-bound, bound);
  return t;
}

LstmCellParams InitCell(std::size_t d, std::size_t h, Rng& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(d + h));
  LstmCellParams cell{UniformTensor({4 * h, d}, bound, rng),
                      UniformTensor({4 * h, h}, bound, rng),
                      UniformTensor({4 * h}, bound, rng)};
  for (std::size_t i = h; i < 2 * h; ++i) cell.bias.data[i] = 1.0;
  return cell;
}

// Little-endian primitives for the checkpoint format.
template <typename T>
void PutLe(std::string& out, T value) {
  static_assert(std::is_trivially_copyable_v<T>);
  std::uint64_t bits = 0;
  std::memcpy(&bits, &value, sizeof(T));
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
  }
}

class LeReader {
 public:
  explicit LeReader(std::string_view data) : data_(data) {}

  template <typename T>
  T Get() {
    if (pos_ + sizeof(T) > data_.size()) throw Error(ErrorCode::kFormatError, "checkpoint truncated");
    std::uint64_t bits = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
    }
    pos_ += sizeof(T);
    T value;
    std::memcpy(&value, &bits, sizeof(T));
    return value;
  }

  std::string_view Bytes(std::size_t n) {
    if (pos_ + n > data_.size()) throw Error(ErrorCode::kFormatError, "checkpoint truncated");
    std::string_view v = data_.substr(pos_, n);
    pos_ += n;
    return v;
  }

  bool AtEnd() const { return pos_ == data_.size(); }

 private:
  std::string_view data_;
  std::size_t pos_ = 0;
};

constexpr std::string_view kCheckpointMagic = "LOGADCK1";

nlohmann::json ConfigToJson(const ModelConfig& c) {
  return {{"embed_dim", c.embed_dim},
          {"hidden_size", c.hidden_size},
          {"window", c.window},
          {"num_classes", c.num_classes},
          {"objective", std::string(ObjectiveName(c.objective))}};
}

ModelConfig ConfigFromJson(const nlohmann::json& j) {
  ModelConfig c;
  c.embed_dim = j.at("embed_dim").get<std::size_t>();
  c.hidden_size = j.at("hidden_size").get<std::size_t>();
  c.window = j.at("window").get<std::size_t>();
  c.num_classes = j.at("num_classes").get<std::size_t>();
  c.objective = ParseObjective(j.at("objective").get<std::string>());
  return c;
}

}  // namespace

Tensor::Tensor(std::vector<std::size_t> shape_in, double fill) : shape(std::move(shape_in)) {
  std::size_t n = 1;
  for (std::size_t s : shape) n *= s;
  data.assign(n, fill);
}

std::string_view ObjectiveName(Objective objective) {
  return objective == Objective::kClassification ? "classification" : "regression";
}

Objective ParseObjective(std::string_view name) {
  if (name == "classification") return Objective::kClassification;
  if (name == "regression") return Objective::kRegression;
  throw Error(ErrorCode::kConfigError, "unknown objective '" + std::string(name) + "'");
}

void ModelConfig::Validate() const {
  if (embed_dim < 1 || hidden_size < 1 || window < 1) {
    throw Error(ErrorCode::kConfigError, "embed_dim, hidden_size and window must be >= 1");
  }
  if (objective == Objective::kClassification && num_classes < 2) {
    throw Error(ErrorCode::kConfigError, "classification needs at least 2 classes");
  }
}

BiLstmParams BiLstmParams::Zeros(const ModelConfig& config) {
  const std::size_t d = config.embed_dim;
  const std::size_t h = config.hidden_size;
  const std::size_t out = config.output_dim();
  BiLstmParams p;
  p.forward = {Tensor({4 * h, d}), Tensor({4 * h, h}), Tensor({4 * h})};
  p.backward = p.forward;
  p.head1_w = Tensor({h, 2 * h});
  p.head1_b = Tensor({h});
  p.head2_w = Tensor({out, h});
  p.head2_b = Tensor({out});
  return p;
}

BiLstmParams BiLstmParams::Init(const ModelConfig& config, std::uint64_t seed) {
  config.Validate();
  Rng rng(seed);
  const std::size_t d = config.embed_dim;
  const std::size_t h = config.hidden_size;
  const std::size_t out = config.output_dim();
  BiLstmParams p;
  p.forward = InitCell(d, h, rng);
  p.backward = InitCell(d, h, rng);
  const double b1 = 1.0 / std::sqrt(static_cast<double>(2 * h));
  p.head1_w = UniformTensor({h, 2 * h}, b1, rng);
  p.head1_b = UniformTensor({h}, b1, rng);
  const double b2 = 1.0 / std::sqrt(static_cast<double>(h));
  p.head2_w = UniformTensor({out, h}, b2, rng);
  p.head2_b = UniformTensor({out}, b2, rng);
  return p;
}

CellState LstmCellStep(const LstmCellParams& cell, std::span<const double> x,
                       std::span<const double> h_prev, std::span<const double> c_prev) {
  const std::size_t h = h_prev.size();
  if (cell.w_input.shape.size() != 2 || cell.w_input.rows() != 4 * h ||
      cell.w_input.cols() != x.size() || cell.w_hidden.rows() != 4 * h ||
      cell.w_hidden.cols() != h || cell.bias.size() != 4 * h || c_prev.size() != h) {
    throw Error(ErrorCode::kShapeMismatch, "lstm cell step shapes");
  }
  RequireFinite(x, "cell input");
  RequireFinite(h_prev, "hidden state");
  RequireFinite(c_prev, "cell state");
  VectorXd a = Mat(cell.w_input) * Eigen::Map<const VectorXd>(x.data(), x.size()) +
               Mat(cell.w_hidden) * Eigen::Map<const VectorXd>(h_prev.data(), h) + Vec(cell.bias);
  const auto hh = static_cast<Eigen::Index>(h);
  const Eigen::ArrayXd gi = Sigmoid(a.segment(0, hh)).array();
  const Eigen::ArrayXd gf = Sigmoid(a.segment(hh, hh)).array();
  const Eigen::ArrayXd gg = a.segment(2 * hh, hh).array().tanh();
  const Eigen::ArrayXd go = Sigmoid(a.segment(3 * hh, hh)).array();
  const Eigen::ArrayXd c = gf * Eigen::Map<const Eigen::ArrayXd>(c_prev.data(), hh) + gi * gg;
  const Eigen::ArrayXd hn = go * c.tanh();
  return {std::vector<double>(hn.begin(), hn.end()), std::vector<double>(c.begin(), c.end())};
}

std::vector<double> BiLstmForward(const BiLstmParams& params, const ModelConfig& config,
                                  std::span<const double> window) {
  const Example ex{window, 0, {}};
  const ForwardPass pass = RunForward(params, config, std::span<const Example>(&ex, 1));
  return {pass.z.data(), pass.z.data() + pass.z.size()};
}

std::vector<double> HeadForward(const BiLstmParams& params, std::span<const double> z,
                                const ModelConfig& config) {
  if (z.size() != 2 * config.hidden_size) throw Error(ErrorCode::kShapeMismatch, "head input");
  VectorXd a1 = Mat(params.head1_w) * Eigen::Map<const VectorXd>(z.data(), z.size()) +
                Vec(params.head1_b);
  VectorXd out = Mat(params.head2_w) * a1.array().tanh().matrix() + Vec(params.head2_b);
  std::vector<double> result(out.data(), out.data() + out.size());
  if (config.objective == Objective::kClassification) return Softmax(result);
  return result;
}

std::vector<double> Softmax(std::span<const double> logits) {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : logits) m = std::max(m, x);
  std::vector<double> p(logits.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    p[i] = std::exp(logits[i] - m);
    sum += p[i];
  }
  for (double& x : p) x /= sum;
  return p;
}

double CrossEntropy(std::span<const double> probabilities, std::size_t target_class) {
  if (target_class >= probabilities.size()) {
    throw Error(ErrorCode::kShapeMismatch, "target class out of range");
  }
  return -std::log(std::max(probabilities[target_class], 1e-300));
}

double MeanSquaredError(std::span<const double> prediction, std::span<const double> target) {
  if (prediction.size() != target.size() || prediction.empty()) {
    throw Error(ErrorCode::kShapeMismatch, "mse of unequal lengths");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < prediction.size(); ++i) {
    const double e = prediction[i] - target[i];
    s += e * e;
  }
  return s / static_cast<double>(prediction.size());
}

double Loss(const ModelConfig& config, std::span<const double> prediction, const Example& target) {
  if (config.objective == Objective::kClassification) {
    return CrossEntropy(prediction, target.target_class);
  }
  return MeanSquaredError(prediction, target.target_embedding);
}

std::vector<std::vector<double>> PredictBatch(const BiLstmParams& params,
                                              const ModelConfig& config,
                                              std::span<const Example> batch) {
  if (batch.empty()) return {};
  const ForwardPass pass = RunForward(params, config, batch);
  std::vector<std::vector<double>> out(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const auto col = pass.out.col(static_cast<Eigen::Index>(i));
    out[i].assign(col.data(), col.data() + col.size());
  }
  return out;
}

double LossAndGradient(const BiLstmParams& params, const ModelConfig& config,
                       std::span<const Example> batch, BiLstmParams* grads) {
  if (batch.empty()) throw Error(ErrorCode::kEmptyInput, "empty batch");
  const ForwardPass pass = RunForward(params, config, batch);
  const auto n = static_cast<Eigen::Index>(batch.size());
  const double inv_n = 1.0 / static_cast<double>(batch.size());
  const bool classify = config.objective == Objective::kClassification;

  MatrixXd d_out = pass.out;
  double loss = 0.0;
  for (Eigen::Index col = 0; col < n; ++col) {
    const Example& ex = batch[static_cast<std::size_t>(col)];
    if (classify) {
      if (ex.target_class >= config.num_classes) {
        throw Error(ErrorCode::kShapeMismatch, "target class out of range");
      }
      const auto row = static_cast<Eigen::Index>(ex.target_class);
      loss += -std::log(std::max(pass.out(row, col), 1e-300));
      d_out(row, col) -= 1.0;
    } else {
      if (ex.target_embedding.size() != config.embed_dim) {
        throw Error(ErrorCode::kShapeMismatch, "regression target dim");
      }
      const Eigen::Map<const VectorXd> y(ex.target_embedding.data(), d_out.rows());
      d_out.col(col) -= y;
      loss += d_out.col(col).squaredNorm() / static_cast<double>(config.embed_dim);
      d_out.col(col) *= 2.0 / static_cast<double>(config.embed_dim);
    }
  }
  loss *= inv_n;
  if (grads == nullptr) return loss;

  d_out *= inv_n;
  *grads = BiLstmParams::Zeros(config);
  const auto h = static_cast<Eigen::Index>(config.hidden_size);
  Mat(grads->head2_w).noalias() = d_out * pass.hidden.transpose();
  Vec(grads->head2_b) = d_out.rowwise().sum();
  const MatrixXd d_a1 =
      ((Mat(params.head2_w).transpose() * d_out).array() * (1.0 - pass.hidden.array().square()))
          .matrix();
  Mat(grads->head1_w).noalias() = d_a1 * pass.z.transpose();
  Vec(grads->head1_b) = d_a1.rowwise().sum();
  const MatrixXd d_z = Mat(params.head1_w).transpose() * d_a1;
  BackpropDirection(params.forward, pass.fwd, pass.inputs, true, d_z.topRows(h), grads->forward);
  BackpropDirection(params.backward, pass.bwd, pass.inputs, false, d_z.bottomRows(h),
                    grads->backward);
  return loss;
}

BiLstmParams Backward(const BiLstmParams& params, const ModelConfig& config,
                      const Example& example) {
  BiLstmParams grads;
  LossAndGradient(params, config, std::span<const Example>(&example, 1), &grads);
  return grads;
}

OptimizerState MakeOptimizer(OptimizerKind kind, const ModelConfig& config) {
  OptimizerState state;
  state.kind = kind;
  if (kind == OptimizerKind::kAdam) {
    state.first_moment = BiLstmParams::Zeros(config);
    state.second_moment = BiLstmParams::Zeros(config);
  }
  return state;
}

void OptimizerStep(BiLstmParams& params, const BiLstmParams& grads, OptimizerState& state,
                   double learning_rate) {
  ++state.step;
  std::vector<Tensor*> p_list;
  std::vector<const Tensor*> g_list;
  params.ForEach([&](std::string_view, Tensor& t) { p_list.push_back(&t); });
  grads.ForEach([&](std::string_view, const Tensor& t) { g_list.push_back(&t); });
  if (state.kind == OptimizerKind::kSgd) {
    for (std::size_t k = 0; k < p_list.size(); ++k) {
      if (p_list[k]->shape != g_list[k]->shape) throw Error(ErrorCode::kShapeMismatch, "grad shape");
      for (std::size_t i = 0; i < p_list[k]->size(); ++i) {
        p_list[k]->data[i] -= learning_rate * g_list[k]->data[i];
      }
    }
    return;
  }
  std::vector<Tensor*> m_list;
  std::vector<Tensor*> v_list;
  state.first_moment.ForEach([&](std::string_view, Tensor& t) { m_list.push_back(&t); });
  state.second_moment.ForEach([&](std::string_view, Tensor& t) { v_list.push_back(&t); });
  const double step = static_cast<double>(state.step);
  const double c1 = 1.0 - std::pow(state.beta1, step);
  const double c2 = 1.0 - std::pow(state.beta2, step);
  for (std::size_t k = 0; k < p_list.size(); ++k) {
    if (p_list[k]->shape != g_list[k]->shape || m_list[k]->shape != g_list[k]->shape) {
      throw Error(ErrorCode::kShapeMismatch, "grad shape");
    }
    double* p = p_list[k]->data.data();
    const double* g = g_list[k]->data.data();
    double* m = m_list[k]->data.data();
    double* v = v_list[k]->data.data();
    for (std::size_t i = 0; i < p_list[k]->size(); ++i) {
      m[i] = state.beta1 * m[i] + (1.0 - state.beta1) * g[i];
      v[i] = state.beta2 * v[i] + (1.0 - state.beta2) * g[i] * g[i];
      const double m_hat = m[i] / c1;
      const double v_hat = v[i] / c2;
      p[i] -= learning_rate * m_hat / (std::sqrt(v_hat) + state.epsilon);
    }
  }
}

double GradientNorm(const BiLstmParams& grads) {
  double s = 0.0;
  grads.ForEach([&](std::string_view, const Tensor& t) {
    for (double x : t.data) s += x * x;
  });
  return std::sqrt(s);
}

void ScaleGradients(BiLstmParams& grads, double factor) {
  grads.ForEach([&](std::string_view, Tensor& t) {
    for (double& x : t.data) x *= factor;
  });
}

void SaveCheckpoint(const Checkpoint& checkpoint, const std::filesystem::path& path) {
  nlohmann::json header;
  header["config"] = ConfigToJson(checkpoint.config);
  try {
    header["meta"] = nlohmann::json::parse(checkpoint.meta_json);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("checkpoint meta: ") + e.what());
  }
  std::size_t count = 0;
  checkpoint.params.ForEach([&](std::string_view, const Tensor&) { ++count; });
  header["tensors"] = count;
  const std::string header_text = header.dump();

  std::string out(kCheckpointMagic);
  PutLe<std::uint64_t>(out, header_text.size());
  out += header_text;
  checkpoint.params.ForEach([&](std::string_view name, const Tensor& t) {
    PutLe<std::uint32_t>(out, static_cast<std::uint32_t>(name.size()));
    out += name;
    PutLe<std::uint32_t>(out, static_cast<std::uint32_t>(t.shape.size()));
    for (std::size_t s : t.shape) PutLe<std::uint64_t>(out, s);
    for (double x : t.data) PutLe<double>(out, x);
  });
  WriteFileAtomic(path, out);
}

Checkpoint LoadCheckpoint(const std::filesystem::path& path) {
  const std::string bytes = ReadFile(path);
  LeReader in(bytes);
  if (in.Bytes(kCheckpointMagic.size()) != kCheckpointMagic) {
    throw Error(ErrorCode::kFormatError, "not a checkpoint file");
  }
  Checkpoint ck;
  std::size_t count = 0;
  try {
    const auto header_len = in.Get<std::uint64_t>();
    const nlohmann::json header = nlohmann::json::parse(in.Bytes(header_len));
    ck.config = ConfigFromJson(header.at("config"));
    ck.meta_json = header.at("meta").dump();
    count = header.at("tensors").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kFormatError, std::string("checkpoint header: ") + e.what());
  } catch (const Error& e) {
    throw Error(ErrorCode::kFormatError, e.what());
  }
  try {
    ck.config.Validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::kFormatError, e.what());
  }
  ck.params = BiLstmParams::Zeros(ck.config);
  std::size_t seen = 0;
  ck.params.ForEach([&](std::string_view name, Tensor& t) {
    const auto name_len = in.Get<std::uint32_t>();
    if (in.Bytes(name_len) != name) {
      throw Error(ErrorCode::kFormatError, "expected tensor " + std::string(name));
    }
    const auto rank = in.Get<std::uint32_t>();
    std::vector<std::size_t> shape(rank);
    for (auto& s : shape) s = in.Get<std::uint64_t>();
    if (shape != t.shape) {
      throw Error(ErrorCode::kFormatError, "tensor " + std::string(name) + " shape disagrees with config");
    }
    for (double& x : t.data) x = in.Get<double>();
    ++seen;
  });
  if (seen != count || !in.AtEnd()) throw Error(ErrorCode::kFormatError, "trailing checkpoint data");
  return ck;
}

Checkpoint LoadCheckpoint(const std::filesystem::path& path, const ModelConfig& expected) {
  Checkpoint ck = LoadCheckpoint(path);
  if (!(ck.config == expected)) {
    throw Error(ErrorCode::kFormatError, "checkpoint config does not match the requested model");
  }
  return ck;
}

}  // namespace logad::nn
