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

#include "gridpriv/rnn.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "gridpriv/rng.h"

namespace gridpriv {
namespace {

using Eigen::MatrixXd;
using Eigen::RowVectorXd;
using Eigen::VectorXd;

template <bool kConst, typename Ptr>
ParamRefsT<kConst> MakeRefs(Ptr base, const ParamLayout& l) {
  using R = ParamRefsT<kConst>;
  using V = typename R::Vec;
  using M = typename R::Mat;
  const int e = l.embedding_dim;
  const int h = l.hidden_dim;
  return R{
      V(base + l.emb_w, e),
      V(base + l.emb_b, e),
      {M(base + l.w[0], h, e), M(base + l.w[1], h, e), M(base + l.w[2], h, e)},
      {M(base + l.u[0], h, h), M(base + l.u[1], h, h), M(base + l.u[2], h, h)},
      {V(base + l.b[0], h), V(base + l.b[1], h), V(base + l.b[2], h)},
      M(base + l.w_q, h, h),
      M(base + l.w_k, h, h),
      V(base + l.head_ctx, h),
      V(base + l.head_last, h),
      base[l.head_bias]};
}

MatrixXd Sigmoid(const MatrixXd& pre) {
  return (1.0 + (-pre.array()).exp()).inverse().matrix();
}

// tanh(x) = 2 sigmoid(2x) - 1. Eigen vectorizes exp but not tanh for doubles.
MatrixXd Tanh(const MatrixXd& pre) {
  return (2.0 * (1.0 + (-2.0 * pre.array()).exp()).inverse() - 1.0).matrix();
}

// Forward activations kept for backpropagation. Step t (1-based) occupies
// columns [(t-1)B, tB) of the per-step blocks; hs additionally holds h_0.
struct Activations {
  int ws = 0;
  int batch = 0;
  MatrixXd hs;     // H x (ws+1)B
  MatrixXd zr;     // 2H x ws B, update gate over reset gate
  MatrixXd n;      // H x ws B
  MatrixXd rh;     // H x ws B, r * h_prev
  MatrixXd keys;   // H x ws B
  MatrixXd query;  // H x B
  MatrixXd alpha;  // ws x B
  MatrixXd ctx;    // H x B
  RowVectorXd y;   // B
};

void RunForward(const ModelParams& params, const MatrixXd& windows,
                Activations& act) {
  const ConstParamRefs p = params.refs();
  const int hdim = params.layout().hidden_dim;
  const int ws = static_cast<int>(windows.rows());
  const int batch = static_cast<int>(windows.cols());
  if (ws != params.config().window) {
    throw std::invalid_argument("window length does not match the model");
  }
  act.ws = ws;
  act.batch = batch;

  // The embedding is affine in the scalar input, so each gate's input term
  // W_g (emb_w x + emb_b) + b_g collapses to a_g x + c_g. The update and
  // reset gates are stacked so they share one product with h_{t-1}.
  VectorXd a_zr(2 * hdim), c_zr(2 * hdim);
  MatrixXd u_zr(2 * hdim, hdim);
  for (int g : {kUpdateGate, kResetGate}) {
    a_zr.segment(g * hdim, hdim) = p.w[g] * p.emb_w;
    c_zr.segment(g * hdim, hdim) = p.w[g] * p.emb_b + p.b[g];
    u_zr.middleRows(g * hdim, hdim) = p.u[g];
  }
  const VectorXd a_n = p.w[kCandidateGate] * p.emb_w;
  const VectorXd c_n = p.w[kCandidateGate] * p.emb_b + p.b[kCandidateGate];

  act.hs.resize(hdim, static_cast<Eigen::Index>(ws + 1) * batch);
  act.hs.leftCols(batch).setZero();
  act.zr.resize(2 * hdim, ws * batch);
  act.n.resize(hdim, ws * batch);
  act.rh.resize(hdim, ws * batch);

  MatrixXd pre_zr(2 * hdim, batch);
  MatrixXd pre(hdim, batch);
  for (int t = 1; t <= ws; ++t) {
    const auto hprev = act.hs.middleCols((t - 1) * batch, batch);
    const RowVectorXd x = windows.row(t - 1);
    const Eigen::Index col = (t - 1) * batch;

    pre_zr.noalias() = a_zr * x;
    pre_zr.colwise() += c_zr;
    pre_zr.noalias() += u_zr * hprev;
    act.zr.middleCols(col, batch) = Sigmoid(pre_zr);
    const auto z = act.zr.block(0, col, hdim, batch);
    const auto r = act.zr.block(hdim, col, hdim, batch);

    act.rh.middleCols(col, batch) = r.cwiseProduct(hprev);
    pre.noalias() = a_n * x;
    pre.colwise() += c_n;
    pre.noalias() += p.u[kCandidateGate] * act.rh.middleCols(col, batch);
    act.n.middleCols(col, batch) = Tanh(pre);

    const auto n = act.n.middleCols(col, batch);
    act.hs.middleCols(t * batch, batch) = n + z.cwiseProduct(hprev - n);
  }

  const auto states = act.hs.rightCols(ws * batch);
  const auto last = act.hs.rightCols(batch);
  const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(hdim));
  act.keys.noalias() = p.w_k * states;
  act.query.noalias() = p.w_q * last;

  act.alpha.resize(ws, batch);
  for (int t = 0; t < ws; ++t) {
    act.alpha.row(t) =
        act.query.cwiseProduct(act.keys.middleCols(t * batch, batch))
            .colwise()
            .sum() *
        inv_sqrt;
  }
  const RowVectorXd col_max = act.alpha.colwise().maxCoeff();
  act.alpha = (act.alpha.rowwise() - col_max).array().exp().matrix();
  const RowVectorXd col_sum = act.alpha.colwise().sum();
  act.alpha = act.alpha.array().rowwise() / col_sum.array();

  act.ctx.setZero(hdim, batch);
  for (int t = 0; t < ws; ++t) {
    act.ctx.array() += states.middleCols(t * batch, batch).array().rowwise() *
                       act.alpha.row(t).array();
  }
  act.y = p.head_ctx.transpose() * act.ctx;
  act.y.noalias() += p.head_last.transpose() * last;
  act.y.array() += p.head_bias;
}

void Backward(const ModelParams& params, const MatrixXd& windows,
              const Activations& act, const RowVectorXd& dy,
              ModelParams& gradient) {
  const ConstParamRefs p = params.refs();
  gradient.data().setZero();
  ParamRefs g = gradient.refs();
  const int hdim = params.layout().hidden_dim;
  const int ws = act.ws;
  const int batch = act.batch;
  const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(hdim));
  const auto states = act.hs.rightCols(ws * batch);
  const auto last = act.hs.rightCols(batch);

  // Head.
  g.head_ctx.noalias() = act.ctx * dy.transpose();
  g.head_last.noalias() = last * dy.transpose();
  g.head_bias = dy.sum();
  const MatrixXd dctx = p.head_ctx * dy;
  MatrixXd dstates = MatrixXd::Zero(hdim, ws * batch);
  dstates.rightCols(batch).noalias() += p.head_last * dy;

  // Attention read-out.
  MatrixXd dalpha(ws, batch);
  for (int t = 0; t < ws; ++t) {
    const auto h_t = states.middleCols(t * batch, batch);
    dalpha.row(t) = dctx.cwiseProduct(h_t).colwise().sum();
    dstates.middleCols(t * batch, batch).array() +=
        dctx.array().rowwise() * act.alpha.row(t).array();
  }
  const RowVectorXd weighted = act.alpha.cwiseProduct(dalpha).colwise().sum();
  const MatrixXd dscore =
      act.alpha.array() * (dalpha.rowwise() - weighted).array();
  MatrixXd dquery = MatrixXd::Zero(hdim, batch);
  MatrixXd dkeys(hdim, ws * batch);
  for (int t = 0; t < ws; ++t) {
    const RowVectorXd s = dscore.row(t) * inv_sqrt;
    dquery.array() +=
        act.keys.middleCols(t * batch, batch).array().rowwise() * s.array();
    dkeys.middleCols(t * batch, batch) =
        (act.query.array().rowwise() * s.array()).matrix();
  }
  g.w_q.noalias() = dquery * last.transpose();
  dstates.rightCols(batch).noalias() += p.w_q.transpose() * dquery;
  g.w_k.noalias() = dkeys * states.transpose();
  dstates.noalias() += p.w_k.transpose() * dkeys;

  // GRU, back through time.
  MatrixXd u_zr_t(hdim, 2 * hdim);
  u_zr_t.leftCols(hdim) = p.u[kUpdateGate].transpose();
  u_zr_t.rightCols(hdim) = p.u[kResetGate].transpose();
  const MatrixXd u_n_t = p.u[kCandidateGate].transpose();
  MatrixXd dzr_pre(2 * hdim, ws * batch);
  MatrixXd dn_pre(hdim, ws * batch);
  MatrixXd carry = MatrixXd::Zero(hdim, batch);
  MatrixXd dh(hdim, batch);
  MatrixXd drh(hdim, batch);
  for (int t = ws; t >= 1; --t) {
    const Eigen::Index col = (t - 1) * batch;
    const auto hprev = act.hs.middleCols(col, batch).array();
    const auto z = act.zr.block(0, col, hdim, batch).array();
    const auto r = act.zr.block(hdim, col, hdim, batch).array();
    const auto n = act.n.middleCols(col, batch).array();
    dh = dstates.middleCols(col, batch) + carry;

    dn_pre.middleCols(col, batch) =
        (dh.array() * (1.0 - z) * (1.0 - n * n)).matrix();
    dzr_pre.block(0, col, hdim, batch) =
        (dh.array() * (hprev - n) * z * (1.0 - z)).matrix();
    carry = (dh.array() * z).matrix();

    drh.noalias() = u_n_t * dn_pre.middleCols(col, batch);
    dzr_pre.block(hdim, col, hdim, batch) =
        (drh.array() * hprev * r * (1.0 - r)).matrix();
    carry.array() += drh.array() * r;
    carry.noalias() += u_zr_t * dzr_pre.middleCols(col, batch);
  }

  const auto prev_states = act.hs.leftCols(ws * batch);
  const MatrixXd du_zr = dzr_pre * prev_states.transpose();
  g.u[kUpdateGate] = du_zr.topRows(hdim);
  g.u[kResetGate] = du_zr.bottomRows(hdim);
  g.u[kCandidateGate].noalias() = dn_pre * act.rh.transpose();

  // Inputs laid out to match the step blocks: index (t-1)B + b.
  const MatrixXd xt = windows.transpose();
  const Eigen::Map<const VectorXd> xcat(xt.data(), xt.size());
  for (int k = 0; k < 3; ++k) {
    const auto delta = k == kCandidateGate ? dn_pre.topRows(hdim)
                                           : dzr_pre.middleRows(k * hdim, hdim);
    const VectorXd d1 = delta * xcat;
    const VectorXd d0 = delta.rowwise().sum();
    g.w[k].noalias() = d1 * p.emb_w.transpose();
    g.w[k].noalias() += d0 * p.emb_b.transpose();
    g.b[k] = d0;
    g.emb_w.noalias() += p.w[k].transpose() * d1;
    g.emb_b.noalias() += p.w[k].transpose() * d0;
  }
}

double SquaredError(const ModelParams& params, const TrainingSample& sample) {
  const double y = Forward(params, sample.window);
  return (y - sample.target) * (y - sample.target);
}

void WriteLe(std::ostream& out, uint64_t v, int bytes) {
  for (int i = 0; i < bytes; ++i)
    out.put(static_cast<char>((v >> (8 * i)) & 0xff));
}

uint64_t ReadLe(std::istream& in, int bytes) {
  uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) {
    const int c = in.get();
    if (c == EOF) throw std::runtime_error("truncated checkpoint");
    v |= static_cast<uint64_t>(static_cast<unsigned char>(c)) << (8 * i);
  }
  return v;
}

constexpr char kMagic[8] = {'G', 'P', 'R', 'N', 'N', '0', '0', '1'};

}  // namespace

void ModelConfig::Validate() const {
  if (window < 1 || embedding_dim < 1 || hidden_dim < 1 || epochs < 1 ||
      batch_size < 1) {
    throw std::invalid_argument("model dimensions must be >= 1");
  }
  if (!(learning_rate > 0.0)) {
    throw std::invalid_argument("learning rate must be positive");
  }
  if (!(rms_decay > 0.0 && rms_decay < 1.0) || !(rms_epsilon > 0.0)) {
    throw std::invalid_argument("invalid RMSProp constants");
  }
}

ParamLayout ParamLayout::For(int embedding_dim, int hidden_dim) {
  ParamLayout l;
  l.embedding_dim = embedding_dim;
  l.hidden_dim = hidden_dim;
  const size_t e = embedding_dim;
  const size_t h = hidden_dim;
  size_t at = 0;
  auto take = [&at](size_t n) {
    const size_t off = at;
    at += n;
    return off;
  };
  l.emb_w = take(e);
  l.emb_b = take(e);
  for (int k = 0; k < 3; ++k) l.w[k] = take(h * e);
  for (int k = 0; k < 3; ++k) l.u[k] = take(h * h);
  for (int k = 0; k < 3; ++k) l.b[k] = take(h);
  l.w_q = take(h * h);
  l.w_k = take(h * h);
  l.head_ctx = take(h);
  l.head_last = take(h);
  l.head_bias = take(1);
  l.total = at;
  return l;
}

ModelParams::ModelParams(const ModelConfig& config)
    : config_(config),
      layout_(ParamLayout::For(config.embedding_dim, config.hidden_dim)),
      data_(VectorXd::Zero(static_cast<Eigen::Index>(layout_.total))) {
  config_.Validate();
}

ParamRefs ModelParams::refs() { return MakeRefs<false>(data_.data(), layout_); }

ConstParamRefs ModelParams::refs() const {
  return MakeRefs<true>(data_.data(), layout_);
}

ModelParams InitParams(const ModelConfig& config, uint64_t seed) {
  ModelParams params(config);
  const ParamLayout& l = params.layout();
  Rng rng(seed, 0x1417);
  double* d = params.data().data();
  auto fill = [&](size_t offset, size_t count, double fan_in) {
    const double bound = 1.0 / std::sqrt(fan_in);
    for (size_t i = 0; i < count; ++i)
      d[offset + i] = rng.Uniform(-bound, bound);
  };
  const size_t e = l.embedding_dim;
  const size_t h = l.hidden_dim;
  fill(l.emb_w, e, 1.0);
  fill(l.emb_b, e, 1.0);
  for (int k = 0; k < 3; ++k) fill(l.w[k], h * e, static_cast<double>(e));
  for (int k = 0; k < 3; ++k) fill(l.u[k], h * h, static_cast<double>(h));
  for (int k = 0; k < 3; ++k) fill(l.b[k], h, static_cast<double>(h));
  fill(l.w_q, h * h, static_cast<double>(h));
  fill(l.w_k, h * h, static_cast<double>(h));
  fill(l.head_ctx, 2 * h + 1, 2.0 * h);  // head_ctx, head_last, head_bias
  return params;
}

Eigen::VectorXd ForwardBatch(const ModelParams& params,
                             const Eigen::MatrixXd& windows) {
  Activations act;
  RunForward(params, windows, act);
  return act.y.transpose();
}

double Forward(const ModelParams& params, std::span<const double> window) {
  if (static_cast<int>(window.size()) != params.config().window) {
    throw std::invalid_argument("window length does not match the model");
  }
  for (double v : window) {
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite input");
  }
  const Eigen::Map<const MatrixXd> w(
      window.data(), static_cast<Eigen::Index>(window.size()), 1);
  return ForwardBatch(params, w)(0);
}

double LossAndGradient(const ModelParams& params,
                       const Eigen::MatrixXd& windows,
                       const Eigen::VectorXd& targets, ModelParams& gradient) {
  if (targets.size() != windows.cols()) {
    throw std::invalid_argument("one target per window required");
  }
  Activations act;
  RunForward(params, windows, act);
  const double batch = static_cast<double>(windows.cols());
  const RowVectorXd resid = act.y - targets.transpose();
  const RowVectorXd dy = resid * (2.0 / batch);
  Backward(params, windows, act, dy, gradient);
  return resid.squaredNorm() / batch;
}

TrainResult Train(const std::vector<TrainingSample>& samples,
                  const ModelConfig& config) {
  config.Validate();
  if (samples.empty()) {
    throw std::invalid_argument(
        "no training samples; every series is shorter than window + 1");
  }
  const int ws = config.window;
  for (const TrainingSample& s : samples) {
    if (static_cast<int>(s.window.size()) != ws) {
      throw std::invalid_argument("sample window length mismatch");
    }
    if (!std::isfinite(s.target) ||
        !std::all_of(s.window.begin(), s.window.end(),
                     [](double v) { return std::isfinite(v); })) {
      throw std::invalid_argument("non-finite training sample");
    }
  }

  TrainResult result{InitParams(config, config.seed), {}};
  ModelParams& params = result.params;
  ModelParams grad(config);
  VectorXd mean_sq = VectorXd::Zero(params.data().size());
  std::vector<size_t> order(samples.size());
  std::iota(order.begin(), order.end(), size_t{0});
  Rng shuffle_rng(config.seed, 0x5f);

  const size_t n = samples.size();
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    for (size_t i = n - 1; i > 0; --i) {
      std::swap(order[i], order[shuffle_rng.UniformInt(i + 1)]);
    }
    double epoch_loss = 0.0;
    for (size_t start = 0; start < n; start += config.batch_size) {
      const size_t count = std::min<size_t>(config.batch_size, n - start);
      MatrixXd windows(ws, static_cast<Eigen::Index>(count));
      VectorXd targets(static_cast<Eigen::Index>(count));
      for (size_t b = 0; b < count; ++b) {
        const TrainingSample& s = samples[order[start + b]];
        for (int t = 0; t < ws; ++t) windows(t, b) = s.window[t];
        targets(b) = s.target;
      }
      epoch_loss += LossAndGradient(params, windows, targets, grad) * count;
      const VectorXd& g = grad.data();
      mean_sq =
          config.rms_decay * mean_sq + (1.0 - config.rms_decay) * g.cwiseAbs2();
      params.data().array() -= config.learning_rate * g.array() /
                               (mean_sq.array().sqrt() + config.rms_epsilon);
    }
    result.epoch_losses.push_back(epoch_loss / static_cast<double>(n));
  }
  return result;
}

GradientCheckResult CompareGradients(const ModelParams& params,
                                     const TrainingSample& sample,
                                     const Eigen::VectorXd& analytic,
                                     double h) {
  if (analytic.size() != params.data().size()) {
    throw std::invalid_argument("gradient size mismatch");
  }
  GradientCheckResult result;
  ModelParams probe = params;
  for (Eigen::Index i = 0; i < probe.data().size(); ++i) {
    const double saved = probe.data()(i);
    probe.data()(i) = saved + h;
    const double up = SquaredError(probe, sample);
    probe.data()(i) = saved - h;
    const double down = SquaredError(probe, sample);
    probe.data()(i) = saved;
    const double numeric = (up - down) / (2.0 * h);
    const double a = analytic(i);
    const double rel = std::abs(a - numeric) /
                       std::max({std::abs(a), std::abs(numeric), 1e-6});
    if (i == 0 || rel > result.max_relative_error) {
      result.max_relative_error = rel;
      result.worst_index = static_cast<size_t>(i);
      result.worst_analytic = a;
      result.worst_numeric = numeric;
    }
  }
  return result;
}

GradientCheckResult GradientCheck(const ModelParams& params,
                                  const TrainingSample& sample, double h) {
  ModelParams grad(params.config());
  const Eigen::Map<const MatrixXd> w(
      sample.window.data(), static_cast<Eigen::Index>(sample.window.size()), 1);
  VectorXd target(1);
  target(0) = sample.target;
  LossAndGradient(params, w, target, grad);
  return CompareGradients(params, sample, grad.data(), h);
}

ConsumptionMatrix BuildSanitizedPrefix(
    const std::vector<RepresentativeSeries>& sanitized, const GridSpec& grid,
    int t_train) {
  const GridSpec prefix_grid = grid.WithTime(t_train);
  std::vector<double> cells(prefix_grid.size(), 0.0);
  std::vector<char> covered(t_train, 0);
  for (const RepresentativeSeries& s : sanitized) {
    if (!s.sanitized) {
      throw std::invalid_argument(
          "pattern prefix may only be built from sanitized series");
    }
    const QuadLevel level{s.depth, grid.cx() >> s.depth, s.t_begin,
                          s.t_begin + static_cast<int>(s.values.size())};
    if (level.t_end > t_train) {
      throw std::invalid_argument("representative extends past t_train");
    }
    for (int x = 0; x < grid.cx(); ++x) {
      for (int y = 0; y < grid.cy(); ++y) {
        if (level.NeighborhoodOf(x, y) != s.neighborhood) continue;
        for (int t = level.t_begin; t < level.t_end; ++t) {
          cells[prefix_grid.Index(x, y, t)] =
              std::clamp(s.values[t - level.t_begin], 0.0, 1.0);
        }
      }
    }
    for (int t = level.t_begin; t < level.t_end; ++t) covered[t] = 1;
  }
  if (std::find(covered.begin(), covered.end(), 0) != covered.end()) {
    throw std::invalid_argument("sanitized series do not cover the prefix");
  }
  return ConsumptionMatrix(prefix_grid, Provenance::kPattern, std::move(cells));
}

ConsumptionMatrix GeneratePatternMatrix(const ModelParams& params,
                                        const ConsumptionMatrix& prefix,
                                        int horizon) {
  if (prefix.provenance() != Provenance::kPattern) {
    throw std::invalid_argument(
        "pattern generation requires a sanitized (pattern) prefix");
  }
  const int ws = params.config().window;
  const int t_train = prefix.grid().ct();
  if (horizon < t_train) {
    throw std::invalid_argument("horizon shorter than the training prefix");
  }
  if (horizon > t_train && t_train < ws) {
    throw std::invalid_argument(
        "missing seed window: prefix shorter than window");
  }
  const GridSpec out_grid = prefix.grid().WithTime(horizon);
  std::vector<double> cells(out_grid.size(), 0.0);
  const int pillars = out_grid.pillars();
  for (int p = 0; p < pillars; ++p) {
    const auto src =
        prefix.cells().subspan(static_cast<size_t>(p) * t_train, t_train);
    std::copy(src.begin(), src.end(),
              cells.begin() + static_cast<std::ptrdiff_t>(p) * horizon);
  }
  if (horizon == t_train) {
    return ConsumptionMatrix(out_grid, Provenance::kPattern, std::move(cells));
  }

  // Pillars are rolled out in fixed-size batches, one batch per task.
  constexpr int kChunk = 64;
  const int chunks = (pillars + kChunk - 1) / kChunk;
#pragma omp parallel for schedule(dynamic, 1)
  for (int c = 0; c < chunks; ++c) {
    const int first = c * kChunk;
    const int count = std::min(kChunk, pillars - first);
    MatrixXd windows(ws, count);
    for (int b = 0; b < count; ++b) {
      const double* series =
          cells.data() + static_cast<size_t>(first + b) * horizon;
      for (int t = 0; t < ws; ++t) windows(t, b) = series[t_train - ws + t];
    }
    for (int t = t_train; t < horizon; ++t) {
      const VectorXd pred = ForwardBatch(params, windows);
      for (int b = 0; b < count; ++b) {
        const double v = std::clamp(pred(b), 0.0, 1.0);
        cells[static_cast<size_t>(first + b) * horizon + t] = v;
      }
      if (ws > 1) windows.topRows(ws - 1) = windows.bottomRows(ws - 1).eval();
      for (int b = 0; b < count; ++b) {
        windows(ws - 1, b) =
            cells[static_cast<size_t>(first + b) * horizon + t];
      }
    }
  }
  return ConsumptionMatrix(out_grid, Provenance::kPattern, std::move(cells));
}

void SaveCheckpoint(const std::string& path, const ModelParams& params) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write checkpoint " + path);
  const ModelConfig& c = params.config();
  out.write(kMagic, sizeof(kMagic));
  WriteLe(out, static_cast<uint32_t>(c.window), 4);
  WriteLe(out, static_cast<uint32_t>(c.embedding_dim), 4);
  WriteLe(out, static_cast<uint32_t>(c.hidden_dim), 4);
  WriteLe(out, params.size(), 8);
  for (Eigen::Index i = 0; i < params.data().size(); ++i) {
    uint64_t bits;
    const double v = params.data()(i);
    std::memcpy(&bits, &v, sizeof(bits));
    WriteLe(out, bits, 8);
  }
  if (!out) throw std::runtime_error("failed writing checkpoint " + path);

  nlohmann::json meta = {
      {"format", "GPRNN001"},
      {"window", c.window},
      {"embedding_dim", c.embedding_dim},
      {"hidden_dim", c.hidden_dim},
      {"epochs", c.epochs},
      {"batch_size", c.batch_size},
      {"learning_rate", c.learning_rate},
      {"optimizer", "rmsprop"},
      {"rms_decay", c.rms_decay},
      {"rms_epsilon", c.rms_epsilon},
      {"seed", c.seed},
      {"parameter_count", params.size()},
  };
  std::ofstream side(path + ".json");
  side << meta.dump(2) << '\n';
}

ModelParams LoadCheckpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read checkpoint " + path);
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw std::runtime_error("not a model checkpoint: " + path);
  }
  ModelConfig config;
  std::ifstream side(path + ".json");
  if (side) {
    const nlohmann::json meta = nlohmann::json::parse(side);
    config.epochs = meta.value("epochs", config.epochs);
    config.batch_size = meta.value("batch_size", config.batch_size);
    config.learning_rate = meta.value("learning_rate", config.learning_rate);
    config.rms_decay = meta.value("rms_decay", config.rms_decay);
    config.rms_epsilon = meta.value("rms_epsilon", config.rms_epsilon);
    config.seed = meta.value("seed", config.seed);
  }
  config.window = static_cast<int>(ReadLe(in, 4));
  config.embedding_dim = static_cast<int>(ReadLe(in, 4));
  config.hidden_dim = static_cast<int>(ReadLe(in, 4));
  ModelParams params(config);
  const uint64_t count = ReadLe(in, 8);
  if (count != params.size()) {
    throw std::runtime_error("checkpoint parameter count mismatch");
  }
  for (uint64_t i = 0; i < count; ++i) {
    const uint64_t bits = ReadLe(in, 8);
    double v;
    std::memcpy(&v, &bits, sizeof(v));
    params.data()(static_cast<Eigen::Index>(i)) = v;
  }
  return params;
}

}  // namespace gridpriv
