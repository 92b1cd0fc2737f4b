// Copyright 2026 The gridpriv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GRIDPRIV_RNN_H_
#define GRIDPRIV_RNN_H_

// Sequence predictor used to estimate the pattern matrix: a scalar input
// embedding feeding a single-layer GRU, a dot-product attention read-out over
// the window's hidden states, and an affine head.
//
//   e_t = emb_w * x_t + emb_b
//   z_t = sigmoid(W_z e_t + U_z h_{t-1} + b_z)
//   r_t = sigmoid(W_r e_t + U_r h_{t-1} + b_r)
//   n_t = tanh(W_n e_t + U_n (r_t * h_{t-1}) + b_n)
//   h_t = (1 - z_t) * n_t + z_t * h_{t-1},           h_0 = 0
//   q = W_q h_ws,  k_t = W_k h_t,  a = softmax_t(q . k_t / sqrt(H))
//   c = sum_t a_t h_t
//   y = head_ctx . c + head_last . h_ws + head_bias
//
// All parameters live in one contiguous vector; gradients share its layout.

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include <Eigen/Dense>

#include "gridpriv/matrix.h"
#include "gridpriv/quadtree.h"

namespace gridpriv {

struct ModelConfig {
  int window = 6;
  int embedding_dim = 128;
  int hidden_dim = 64;
  int epochs = 20;
  int batch_size = 32;
  double learning_rate = 1e-3;
  // RMSProp running-average decay and denominator guard.
  double rms_decay = 0.99;
  double rms_epsilon = 1e-8;
  uint64_t seed = 0;

  // Throws std::invalid_argument on non-positive sizes or rate.
  void Validate() const;
};

enum Gate { kUpdateGate = 0, kResetGate = 1, kCandidateGate = 2 };

struct ParamLayout {
  int embedding_dim = 0;
  int hidden_dim = 0;
  size_t emb_w = 0;
  size_t emb_b = 0;
  std::array<size_t, 3> w{};
  std::array<size_t, 3> u{};
  std::array<size_t, 3> b{};
  size_t w_q = 0;
  size_t w_k = 0;
  size_t head_ctx = 0;
  size_t head_last = 0;
  size_t head_bias = 0;
  size_t total = 0;

  static ParamLayout For(int embedding_dim, int hidden_dim);
};

// Named views into a parameter (or gradient) vector.
template <bool kConst>
struct ParamRefsT {
  using Vec = Eigen::Map<
      std::conditional_t<kConst, const Eigen::VectorXd, Eigen::VectorXd>>;
  using Mat = Eigen::Map<
      std::conditional_t<kConst, const Eigen::MatrixXd, Eigen::MatrixXd>>;
  using Scalar = std::conditional_t<kConst, const double, double>;

  Vec emb_w;
  Vec emb_b;
  std::array<Mat, 3> w;  // H x E
  std::array<Mat, 3> u;  // H x H
  std::array<Vec, 3> b;  // H
  Mat w_q;               // H x H
  Mat w_k;               // H x H
  Vec head_ctx;          // H
  Vec head_last;         // H
  Scalar& head_bias;
};

using ParamRefs = ParamRefsT<false>;
using ConstParamRefs = ParamRefsT<true>;

class ModelParams {
 public:
  // All-zero parameters shaped for `config`.
  explicit ModelParams(const ModelConfig& config);

  const ModelConfig& config() const { return config_; }
  const ParamLayout& layout() const { return layout_; }
  size_t size() const { return layout_.total; }

  Eigen::VectorXd& data() { return data_; }
  const Eigen::VectorXd& data() const { return data_; }

  ParamRefs refs();
  ConstParamRefs refs() const;

  bool AllFinite() const { return data_.allFinite(); }

 private:
  ModelConfig config_;
  ParamLayout layout_;
  Eigen::VectorXd data_;
};

// Uniform in +-1/sqrt(fan_in), drawn from Rng(seed).
ModelParams InitParams(const ModelConfig& config, uint64_t seed);

// Prediction for one window of config().window values. Throws
// std::invalid_argument on a wrong length or non-finite input.
double Forward(const ModelParams& params, std::span<const double> window);

// Predictions for a batch; column b of `windows` (window x B) is one window.
Eigen::VectorXd ForwardBatch(const ModelParams& params,
                             const Eigen::MatrixXd& windows);

// Mean squared error over the batch and its gradient (same layout as the
// parameters). For a batch of one this is the plain squared error.
double LossAndGradient(const ModelParams& params,
                       const Eigen::MatrixXd& windows,
                       const Eigen::VectorXd& targets, ModelParams& gradient);

struct TrainResult {
  ModelParams params;
  std::vector<double> epoch_losses;  // mean training loss per epoch
};

// Mini-batch RMSProp on mean squared error. Samples are reshuffled every
// epoch from the config seed; a fixed seed gives a bit-identical run.
// Throws std::invalid_argument on an empty or malformed sample set.
TrainResult Train(const std::vector<TrainingSample>& samples,
                  const ModelConfig& config);

struct GradientCheckResult {
  double max_relative_error = 0.0;
  size_t worst_index = 0;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
};

// Compares `analytic` against central finite differences of the squared
// error (step `h`) for every parameter:
//   max |g_a - g_n| / max(|g_a|, |g_n|, 1e-6).
// The floor sits above the roundoff of a central difference.
GradientCheckResult CompareGradients(const ModelParams& params,
                                     const TrainingSample& sample,
                                     const Eigen::VectorXd& analytic,
                                     double h = 1e-5);

// CompareGradients against the backpropagated gradient.
GradientCheckResult GradientCheck(const ModelParams& params,
                                  const TrainingSample& sample,
                                  double h = 1e-5);

// Per-pillar values for the training prefix, assembled only from sanitized
// representatives: time step t of pillar (x, y) takes the value of the
// neighborhood containing (x, y) at the level whose interval holds t.
// Values are clamped to [0, 1]. The result is tagged kPattern. Throws
// std::invalid_argument if any series is unsanitized or a step is uncovered.
ConsumptionMatrix BuildSanitizedPrefix(
    const std::vector<RepresentativeSeries>& sanitized, const GridSpec& grid,
    int t_train);

// Extends the sanitized prefix to `horizon` steps by rolling the model
// forward independently per pillar: each new value is Forward() of the
// previous `window` values, clamped to [0, 1]. Requires a kPattern prefix
// with at least `window` steps; costs no budget.
ConsumptionMatrix GeneratePatternMatrix(const ModelParams& params,
                                        const ConsumptionMatrix& prefix,
                                        int horizon);

// Flat binary checkpoint: magic "GPRNN001", int32 window, embedding_dim,
// hidden_dim, uint64 parameter count, then the parameters as little-endian
// doubles. A JSON sidecar at `path + ".json"` records the full config.
void SaveCheckpoint(const std::string& path, const ModelParams& params);
ModelParams LoadCheckpoint(const std::string& path);

}  // namespace gridpriv

#endif  // GRIDPRIV_RNN_H_
