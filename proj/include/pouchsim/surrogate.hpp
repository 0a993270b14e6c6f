#pragma once

/**
 * @file surrogate.hpp
 * @brief 11 -> 150 -> 100 -> 3 multilayer-perceptron regressor for the
 * actuator performance triple.
 *
 * Hidden layers use the rectifier, the output layer is linear in a
 * standardized target space: y = raw * output_scale + output_offset, with the
 * per-output mean and standard deviation fitted on the training split.
 * Training minimizes the standardized mean squared error with mini-batch
 * Adam. Everything is deterministic for a fixed (dataset, TrainConfig).
 */

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "pouchsim/bench_oracle.hpp"
#include "pouchsim/design_space.hpp"
#include "pouchsim/errors.hpp"

namespace pouchsim {

inline constexpr std::array<int, 4> kLayerDims{11, 150, 100, 3};
inline constexpr std::size_t kOutputCount = 3;
inline constexpr std::array<std::string_view, 3> kOutputNames{"alpha", "generated_pressure_kpa",
                                                              "recovery_time_s"};

struct DenseLayer {
    Eigen::MatrixXd weights;  // fan_in x fan_out
    Eigen::RowVectorXd bias;  // fan_out
};

struct MlpModel {
    std::vector<DenseLayer> layers;
    std::array<double, 3> output_scale{1.0, 1.0, 1.0};
    std::array<double, 3> output_offset{0.0, 0.0, 0.0};

    std::vector<int> layer_dims() const {
        std::vector<int> dims;
        if (layers.empty()) return dims;
        dims.push_back(static_cast<int>(layers.front().weights.rows()));
        for (const auto& l : layers) dims.push_back(static_cast<int>(l.weights.cols()));
        return dims;
    }
};

/// Per-layer gradients, shaped like MlpModel::layers.
using Gradients = std::vector<DenseLayer>;

inline MlpModel zero_model() {
    MlpModel m;
    for (std::size_t i = 0; i + 1 < kLayerDims.size(); ++i)
        m.layers.push_back({Eigen::MatrixXd::Zero(kLayerDims[i], kLayerDims[i + 1]),
                            Eigen::RowVectorXd::Zero(kLayerDims[i + 1])});
    return m;
}

/// Glorot-uniform weights, zero biases, identity output scaling.
inline MlpModel init_model(std::uint64_t seed) {
    MlpModel m = zero_model();
    std::mt19937_64 rng(seed);
    for (auto& layer : m.layers) {
        const double limit =
            std::sqrt(6.0 / static_cast<double>(layer.weights.rows() + layer.weights.cols()));
        std::uniform_real_distribution<double> dist(-limit, limit);
        // Fill row-major so the draw order does not depend on Eigen storage.
        for (Eigen::Index r = 0; r < layer.weights.rows(); ++r)
            for (Eigen::Index c = 0; c < layer.weights.cols(); ++c) layer.weights(r, c) = dist(rng);
    }
    return m;
}

inline void check_shapes(const MlpModel& m) {
    const auto dims = m.layer_dims();
    if (!std::equal(dims.begin(), dims.end(), kLayerDims.begin(), kLayerDims.end()))
        throw ValidationError("model layer dimensions do not match 11-150-100-3");
    for (const auto& l : m.layers)
        if (l.bias.size() != l.weights.cols()) throw ValidationError("bias length mismatch");
    for (double s : m.output_scale)
        if (!(s > 0.0) || !std::isfinite(s)) throw ValidationError("output_scale must be positive");
}

// ---- forward / backward ---------------------------------------------------

namespace detail {
inline Eigen::MatrixXd relu(const Eigen::MatrixXd& z) { return z.cwiseMax(0.0); }
}  // namespace detail

/// Standardized network outputs for a batch of encoded rows (n x 11).
inline Eigen::MatrixXd forward_raw(const MlpModel& m, const Eigen::MatrixXd& x) {
    Eigen::MatrixXd h = x;
    for (std::size_t i = 0; i < m.layers.size(); ++i) {
        Eigen::MatrixXd z = h * m.layers[i].weights;
        z.rowwise() += m.layers[i].bias;
        h = (i + 1 < m.layers.size()) ? detail::relu(z) : z;
    }
    return h;
}

inline std::array<double, 3> destandardize(const MlpModel& m, const std::array<double, 3>& raw) {
    std::array<double, 3> y{};
    for (std::size_t k = 0; k < kOutputCount; ++k) y[k] = raw[k] * m.output_scale[k] + m.output_offset[k];
    return y;
}

/// Physical-unit outputs (alpha, P_g, t) for one feature vector.
inline std::array<double, 3> forward(const MlpModel& m, const FeatureVector& x) {
    for (double v : x)
        if (!std::isfinite(v)) throw ValidationError("forward: non-finite input feature");
    Eigen::MatrixXd row(1, static_cast<Eigen::Index>(kFeatureCount));
    for (std::size_t j = 0; j < kFeatureCount; ++j) row(0, static_cast<Eigen::Index>(j)) = x[j];
    const Eigen::MatrixXd raw = forward_raw(m, row);
    return destandardize(m, {raw(0, 0), raw(0, 1), raw(0, 2)});
}

/// Encoded features (n x 11) and standardized targets (n x 3) for a sample set.
struct Batch {
    Eigen::MatrixXd x;
    Eigen::MatrixXd y;
};

inline Eigen::MatrixXd encode_rows(std::span<const ActuatorDesign> designs) {
    Eigen::MatrixXd x(static_cast<Eigen::Index>(designs.size()), static_cast<Eigen::Index>(kFeatureCount));
    for (std::size_t i = 0; i < designs.size(); ++i) {
        const auto f = encode_features(designs[i]);
        for (std::size_t j = 0; j < kFeatureCount; ++j)
            x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = f[j];
    }
    return x;
}

inline std::array<double, 3> as_array(const PerformanceTriple& t) {
    return {t.alpha, t.generated_pressure_kpa, t.recovery_time_s};
}

inline Batch make_batch(const MlpModel& m, std::span<const PerformanceSample> samples) {
    std::vector<ActuatorDesign> designs;
    designs.reserve(samples.size());
    for (const auto& s : samples) designs.push_back(s.design);
    Batch b{encode_rows(designs), Eigen::MatrixXd(static_cast<Eigen::Index>(samples.size()), 3)};
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto y = as_array(samples[i].measured);
        for (std::size_t k = 0; k < kOutputCount; ++k)
            b.y(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
                (y[k] - m.output_offset[k]) / m.output_scale[k];
    }
    return b;
}

struct LossAndGradients {
    double loss = 0.0;
    Gradients gradients;
};

/// Mean over rows and outputs of the squared standardized error, with
/// reverse-mode gradients for every weight and bias.
inline LossAndGradients loss_and_gradients(const MlpModel& m, const Eigen::MatrixXd& x,
                                           const Eigen::MatrixXd& y) {
    if (x.rows() == 0) throw ValidationError("loss_and_gradients: empty batch");
    const std::size_t depth = m.layers.size();
    std::vector<Eigen::MatrixXd> acts;   // input to each layer
    std::vector<Eigen::MatrixXd> preact; // z of each layer
    acts.reserve(depth);
    preact.reserve(depth);
    Eigen::MatrixXd h = x;
    for (std::size_t i = 0; i < depth; ++i) {
        acts.push_back(h);
        Eigen::MatrixXd z = h * m.layers[i].weights;
        z.rowwise() += m.layers[i].bias;
        preact.push_back(z);
        h = (i + 1 < depth) ? detail::relu(z) : z;
    }
    const Eigen::MatrixXd diff = h - y;
    const double denom = static_cast<double>(x.rows() * y.cols());
    LossAndGradients out;
    out.loss = diff.squaredNorm() / denom;
    out.gradients.resize(depth);

    Eigen::MatrixXd delta = diff * (2.0 / denom);
    for (std::size_t i = depth; i-- > 0;) {
        out.gradients[i].weights = acts[i].transpose() * delta;
        out.gradients[i].bias = delta.colwise().sum();
        if (i > 0) {
            Eigen::MatrixXd back = delta * m.layers[i].weights.transpose();
            delta = back.cwiseProduct((preact[i - 1].array() > 0.0).cast<double>().matrix());
        }
    }
    return out;
}

inline LossAndGradients loss_and_gradients(const MlpModel& m,
                                           std::span<const PerformanceSample> samples) {
    if (samples.empty()) throw ValidationError("loss_and_gradients: empty batch");
    const Batch b = make_batch(m, samples);
    return loss_and_gradients(m, b.x, b.y);
}

// ---- flat parameter view (gradient checks, optimizers) --------------------

inline std::size_t parameter_count(const std::vector<DenseLayer>& layers) {
    std::size_t n = 0;
    for (const auto& l : layers) n += static_cast<std::size_t>(l.weights.size() + l.bias.size());
    return n;
}

/// Parameter i in the order: layer0 weights (column-major), layer0 bias, layer1 ...
inline double& parameter_at(std::vector<DenseLayer>& layers, std::size_t i) {
    for (auto& l : layers) {
        const auto nw = static_cast<std::size_t>(l.weights.size());
        if (i < nw) return l.weights.data()[i];
        i -= nw;
        const auto nb = static_cast<std::size_t>(l.bias.size());
        if (i < nb) return l.bias.data()[i];
        i -= nb;
    }
    throw std::out_of_range("parameter index out of range");
}

// ---- training -------------------------------------------------------------

struct TrainConfig {
    double learning_rate = 1e-3;
    int epochs = 500;
    int batch_size = 32;
    std::uint64_t seed = 42;
    double train_fraction = 0.8;

    // Adam moments.
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

struct TrainHistory {
    std::vector<double> epoch_loss;
    /// Outputs whose training targets had zero variance (scale clamped to 1).
    std::array<bool, 3> degenerate_output{false, false, false};

    bool degenerate() const {
        return std::any_of(degenerate_output.begin(), degenerate_output.end(), [](bool b) { return b; });
    }
};

struct DataSplit {
    std::vector<std::size_t> train;
    std::vector<std::size_t> validation;
};

struct TrainResult {
    MlpModel model;
    TrainHistory history;
    DataSplit split;
};

/// Seeded shuffle of 0..n-1 cut at round(n * fraction), keeping both sides non-empty.
inline DataSplit split_indices(std::size_t n, std::uint64_t seed, double train_fraction) {
    if (n < 2) throw ValidationError("split_indices: need at least two samples");
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), 0x5u};
    std::mt19937_64 rng(seq);
    std::shuffle(order.begin(), order.end(), rng);
    auto n_train = static_cast<std::size_t>(std::llround(static_cast<double>(n) * train_fraction));
    n_train = std::clamp<std::size_t>(n_train, 1, n - 1);
    DataSplit s;
    s.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
    s.validation.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
    return s;
}

inline std::vector<PerformanceSample> gather(std::span<const PerformanceSample> items,
                                             const std::vector<std::size_t>& idx) {
    std::vector<PerformanceSample> out;
    out.reserve(idx.size());
    for (auto i : idx) out.push_back(items[i]);
    return out;
}

inline void validate_train_config(const TrainConfig& cfg, std::size_t dataset_size) {
    if (!(cfg.learning_rate > 0.0)) throw ValidationError("learning_rate must be > 0");
    if (cfg.epochs < 1) throw ValidationError("epochs must be >= 1");
    if (cfg.batch_size < 1 || static_cast<std::size_t>(cfg.batch_size) > dataset_size)
        throw ValidationError("batch_size must lie in [1, dataset size]");
    if (!(cfg.train_fraction > 0.0 && cfg.train_fraction < 1.0))
        throw ValidationError("train_fraction must lie in (0, 1)");
}

inline TrainResult train(std::span<const PerformanceSample> dataset, const TrainConfig& cfg) {
    if (dataset.size() < 10) throw ValidationError("train: need at least 10 samples");
    validate_train_config(cfg, dataset.size());

    TrainResult result;
    result.split = split_indices(dataset.size(), cfg.seed, cfg.train_fraction);
    result.model = init_model(cfg.seed);
    MlpModel& model = result.model;

    const auto train_set = gather(dataset, result.split.train);
    const std::size_t n = train_set.size();

    for (std::size_t k = 0; k < kOutputCount; ++k) {
        double mean = 0.0;
        for (const auto& s : train_set) mean += as_array(s.measured)[k];
        mean /= static_cast<double>(n);
        double var = 0.0;
        for (const auto& s : train_set) {
            const double d = as_array(s.measured)[k] - mean;
            var += d * d;
        }
        const double sd = std::sqrt(var / static_cast<double>(n));
        model.output_offset[k] = mean;
        if (sd > 1e-12) {
            model.output_scale[k] = sd;
        } else {
            model.output_scale[k] = 1.0;
            result.history.degenerate_output[k] = true;
        }
    }

    const Batch all = make_batch(model, train_set);
    Gradients m1 = zero_model().layers;
    Gradients m2 = zero_model().layers;

    std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32), 0xEu};
    std::mt19937_64 rng(seq);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    const auto bs = static_cast<std::size_t>(std::min<std::size_t>(static_cast<std::size_t>(cfg.batch_size), n));

    Eigen::MatrixXd bx(static_cast<Eigen::Index>(bs), all.x.cols());
    Eigen::MatrixXd by(static_cast<Eigen::Index>(bs), all.y.cols());
    std::uint64_t step = 0;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        double epoch_sum = 0.0;
        for (std::size_t start = 0; start < n; start += bs) {
            const std::size_t len = std::min(bs, n - start);
            bx.resize(static_cast<Eigen::Index>(len), all.x.cols());
            by.resize(static_cast<Eigen::Index>(len), all.y.cols());
            for (std::size_t r = 0; r < len; ++r) {
                bx.row(static_cast<Eigen::Index>(r)) = all.x.row(static_cast<Eigen::Index>(order[start + r]));
                by.row(static_cast<Eigen::Index>(r)) = all.y.row(static_cast<Eigen::Index>(order[start + r]));
            }
            auto lg = loss_and_gradients(model, bx, by);
            epoch_sum += lg.loss * static_cast<double>(len);

            ++step;
            const double c1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(step));
            const double c2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(step));
            auto adam = [&](auto param, auto grad, auto first, auto second) {
                first = cfg.beta1 * first + (1.0 - cfg.beta1) * grad;
                second = cfg.beta2 * second + (1.0 - cfg.beta2) * grad.square();
                param -= cfg.learning_rate * (first / c1) / ((second / c2).sqrt() + cfg.epsilon);
            };
            for (std::size_t l = 0; l < model.layers.size(); ++l) {
                adam(model.layers[l].weights.array(), lg.gradients[l].weights.array(),
                     m1[l].weights.array(), m2[l].weights.array());
                adam(model.layers[l].bias.array(), lg.gradients[l].bias.array(), m1[l].bias.array(),
                     m2[l].bias.array());
            }
        }
        result.history.epoch_loss.push_back(epoch_sum / static_cast<double>(n));
    }
    return result;
}

// ---- evaluation -----------------------------------------------------------

struct Metrics {
    double mae = 0.0;
    double mse = 0.0;
    std::optional<double> r2;  // empty when targets have zero variance
};

inline double mean_of(std::span<const double> v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

inline Metrics compute_metrics(std::span<const double> predicted, std::span<const double> target) {
    if (predicted.empty() || predicted.size() != target.size())
        throw ValidationError("compute_metrics: need equal, non-empty prediction and target sets");
    const double n = static_cast<double>(target.size());
    const double mean = mean_of(target);
    double abs_sum = 0.0, sq_sum = 0.0, tot = 0.0;
    for (std::size_t i = 0; i < target.size(); ++i) {
        const double e = predicted[i] - target[i];
        abs_sum += std::abs(e);
        sq_sum += e * e;
        const double d = target[i] - mean;
        tot += d * d;
    }
    Metrics m{abs_sum / n, sq_sum / n, std::nullopt};
    if (tot > 0.0) m.r2 = 1.0 - sq_sum / tot;
    return m;
}

struct EvaluationReport {
    std::array<Metrics, 3> per_output;
    Metrics aggregate;  // mean of the per-output figures
    std::array<std::vector<double>, 3> errors;  // prediction - target, physical units
};

inline std::vector<std::array<double, 3>> predict_batch(const MlpModel& m,
                                                        std::span<const ActuatorDesign> designs) {
    const Eigen::MatrixXd raw = forward_raw(m, encode_rows(designs));
    std::vector<std::array<double, 3>> out(designs.size());
    for (std::size_t i = 0; i < designs.size(); ++i) {
        const auto r = static_cast<Eigen::Index>(i);
        out[i] = destandardize(m, {raw(r, 0), raw(r, 1), raw(r, 2)});
    }
    return out;
}

inline EvaluationReport evaluate(const MlpModel& m, std::span<const PerformanceSample> samples) {
    if (samples.empty()) throw ValidationError("evaluate: empty sample set");
    std::vector<ActuatorDesign> designs;
    for (const auto& s : samples) designs.push_back(s.design);
    const auto preds = predict_batch(m, designs);

    EvaluationReport rep;
    std::vector<double> p(samples.size()), t(samples.size());
    bool all_r2 = true;
    double r2_sum = 0.0;
    for (std::size_t k = 0; k < kOutputCount; ++k) {
        for (std::size_t i = 0; i < samples.size(); ++i) {
            p[i] = preds[i][k];
            t[i] = as_array(samples[i].measured)[k];
            rep.errors[k].push_back(p[i] - t[i]);
        }
        rep.per_output[k] = compute_metrics(p, t);
        rep.aggregate.mae += rep.per_output[k].mae / 3.0;
        rep.aggregate.mse += rep.per_output[k].mse / 3.0;
        if (rep.per_output[k].r2)
            r2_sum += *rep.per_output[k].r2;
        else
            all_r2 = false;
    }
    if (all_r2) rep.aggregate.r2 = r2_sum / 3.0;
    return rep;
}

inline constexpr double kMinPredictedTimeS = 0.01;

/// Surrogate query clamped into the valid PerformanceTriple range.
inline PerformanceTriple predict_triple(const MlpModel& m, const ActuatorDesign& d) {
    const auto y = forward(m, encode_features(d));
    return {std::clamp(y[0], 0.0, 1.0), std::max(y[1], 0.0), std::max(y[2], kMinPredictedTimeS)};
}

}  // namespace pouchsim
