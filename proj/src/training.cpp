#include "skycast/training.hpp"

#include <cmath>
#include <stdexcept>

#include "skycast/activations.hpp"
#include "skycast/errors.hpp"
#include "skycast/rng.hpp"

namespace skycast {

long long scaled_epochs(const TrainConfig& config) {
    if (config.epochs <= 0) throw std::invalid_argument("epochs must be positive");
    if (!(config.epoch_scale > 0.0)) throw std::invalid_argument("epoch_scale must be positive");
    return std::llround(static_cast<double>(config.epochs) * config.epoch_scale);
}

namespace {

void append_flat(GradientSet& out, const Matrix& m) {
    out.insert(out.end(), m.data(), m.data() + m.size());
}

void append_flat(GradientSet& out, const Vector& v) {
    out.insert(out.end(), v.begin(), v.end());
}

struct LstmGrads {
    Matrix w_xi, w_hi, w_xf, w_hf, w_xc, w_hc, w_xo, w_ho;
    Vector b_i, b_f, b_c, b_o;
    Vector w_out;
    double b_out = 0.0;
    Vector w_ci, w_cf, w_co; // used only for the peephole variant

    explicit LstmGrads(std::size_t n_h, bool peephole)
        : w_xi(n_h, 2), w_hi(n_h, n_h), w_xf(n_h, 2), w_hf(n_h, n_h), w_xc(n_h, 2),
          w_hc(n_h, n_h), w_xo(n_h, 2), w_ho(n_h, n_h), b_i(n_h, 0.0), b_f(n_h, 0.0),
          b_c(n_h, 0.0), b_o(n_h, 0.0), w_out(n_h, 0.0) {
        if (peephole) {
            w_ci = Vector(n_h, 0.0);
            w_cf = Vector(n_h, 0.0);
            w_co = Vector(n_h, 0.0);
        }
    }
};

// Shared backward walk. Peephole handling follows the forward definitions: the
// o gate peeks at the new cell state (so its pre-activation gradient feeds back
// into dL/dc_t), while the i and f gates peek at c_{t-1}.
template <bool Peephole>
GradientSet bptt_impl(const LstmParams& p, const Vector* w_ci, const Vector* w_cf,
                      const Vector* w_co, const SequenceCache& cache, double y) {
    const std::size_t n = p.n_h;
    LstmGrads g(n, Peephole);

    double dyhat = 2.0 * (cache.yhat - y);
    const Vector& h_last = cache.steps.back().h;
    for (std::size_t k = 0; k < n; ++k) g.w_out[k] = dyhat * h_last[k];
    g.b_out = dyhat;

    Vector dh(n);
    for (std::size_t k = 0; k < n; ++k) dh[k] = dyhat * p.w_out[k];
    Vector dc(n, 0.0);

    for (std::size_t t = cache.steps.size(); t-- > 0;) {
        const StepCache& s = cache.steps[t];

        Vector d_pre_o(n), d_pre_i(n), d_pre_f(n), d_pre_g(n), dc_prev(n);
        for (std::size_t k = 0; k < n; ++k) {
            double do_k = dh[k] * s.tanh_c[k];
            d_pre_o[k] = do_k * sigmoid_deriv(s.o[k]);
            dc[k] += dh[k] * s.o[k] * tanh_deriv(s.tanh_c[k]);
            if constexpr (Peephole) {
                dc[k] += d_pre_o[k] * (*w_co)[k];
                g.w_co[k] += d_pre_o[k] * s.c[k];
            }
        }
        for (std::size_t k = 0; k < n; ++k) {
            d_pre_i[k] = dc[k] * s.g[k] * sigmoid_deriv(s.i[k]);
            d_pre_g[k] = dc[k] * s.i[k] * tanh_deriv(s.g[k]);
            d_pre_f[k] = dc[k] * s.c_prev[k] * sigmoid_deriv(s.f[k]);
            dc_prev[k] = dc[k] * s.f[k];
            if constexpr (Peephole) {
                dc_prev[k] += d_pre_i[k] * (*w_ci)[k] + d_pre_f[k] * (*w_cf)[k];
                g.w_ci[k] += d_pre_i[k] * s.c_prev[k];
                g.w_cf[k] += d_pre_f[k] * s.c_prev[k];
            }
        }

        add_outer(g.w_xi, d_pre_i, s.x);
        add_outer(g.w_hi, d_pre_i, s.h_prev);
        axpy(1.0, d_pre_i, g.b_i);
        add_outer(g.w_xf, d_pre_f, s.x);
        add_outer(g.w_hf, d_pre_f, s.h_prev);
        axpy(1.0, d_pre_f, g.b_f);
        add_outer(g.w_xc, d_pre_g, s.x);
        add_outer(g.w_hc, d_pre_g, s.h_prev);
        axpy(1.0, d_pre_g, g.b_c);
        add_outer(g.w_xo, d_pre_o, s.x);
        add_outer(g.w_ho, d_pre_o, s.h_prev);
        axpy(1.0, d_pre_o, g.b_o);

        Vector dh_prev = matvec_transposed(p.w_hi, d_pre_i);
        axpy(1.0, matvec_transposed(p.w_hf, d_pre_f), dh_prev);
        axpy(1.0, matvec_transposed(p.w_hc, d_pre_g), dh_prev);
        axpy(1.0, matvec_transposed(p.w_ho, d_pre_o), dh_prev);

        dh = std::move(dh_prev);
        dc = std::move(dc_prev);
    }

    GradientSet flat;
    flat.reserve(4 * (2 * n + n * n + n) + (Peephole ? 3 * n : 0) + n + 1);
    append_flat(flat, g.w_xi);
    append_flat(flat, g.w_hi);
    if constexpr (Peephole) append_flat(flat, g.w_ci);
    append_flat(flat, g.b_i);
    append_flat(flat, g.w_xf);
    append_flat(flat, g.w_hf);
    if constexpr (Peephole) append_flat(flat, g.w_cf);
    append_flat(flat, g.b_f);
    append_flat(flat, g.w_xc);
    append_flat(flat, g.w_hc);
    append_flat(flat, g.b_c);
    append_flat(flat, g.w_xo);
    append_flat(flat, g.w_ho);
    if constexpr (Peephole) append_flat(flat, g.w_co);
    append_flat(flat, g.b_o);
    append_flat(flat, g.w_out);
    flat.push_back(g.b_out);
    return flat;
}

} // namespace

GradientSet backprop_feedforward(const FeedforwardParams& params, const Vector& x, double y) {
    FeedforwardCache cache;
    double yhat = feedforward_forward(params, x, &cache);

    const std::size_t layer_count = params.layers.size();
    std::vector<Matrix> g_w;
    std::vector<Vector> g_b;
    g_w.reserve(layer_count);
    g_b.reserve(layer_count);
    for (const DenseLayer& layer : params.layers) {
        g_w.emplace_back(layer.w.rows(), layer.w.cols());
        g_b.emplace_back(layer.b.size(), 0.0);
    }

    // delta over the post-activation output of the current layer
    Vector delta{2.0 * (yhat - y)};
    for (std::size_t l = layer_count; l-- > 0;) {
        const Vector& out = cache.acts[l + 1];
        const Vector& in = cache.acts[l];
        Vector d_pre(out.size());
        for (std::size_t k = 0; k < out.size(); ++k) d_pre[k] = delta[k] * sigmoid_deriv(out[k]);
        add_outer(g_w[l], d_pre, in);
        axpy(1.0, d_pre, g_b[l]);
        if (l > 0) delta = matvec_transposed(params.layers[l].w, d_pre);
    }

    GradientSet flat;
    for (std::size_t l = 0; l < layer_count; ++l) {
        append_flat(flat, g_w[l]);
        append_flat(flat, g_b[l]);
    }
    return flat;
}

GradientSet bptt(const LstmParams& params, const Vector& window, double y) {
    SequenceCache cache = sequence_forward(params, window);
    return bptt_impl<false>(params, nullptr, nullptr, nullptr, cache, y);
}

GradientSet bptt(const LstmPcParams& params, const Vector& window, double y) {
    SequenceCache cache = sequence_forward(params, window);
    return bptt_impl<true>(params.base, &params.w_ci, &params.w_cf, &params.w_co, cache, y);
}

GradientSet model_gradient(const ModelParams& params, const Vector& window, double y) {
    return std::visit(
        [&](const auto& p) -> GradientSet {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, FeedforwardParams>) {
                return backprop_feedforward(p, window, y);
            } else if constexpr (std::is_same_v<T, LstmParams> ||
                                 std::is_same_v<T, LstmPcParams>) {
                return bptt(p, window, y);
            } else {
                throw std::invalid_argument("elm has no gradient training");
            }
        },
        params);
}

void sgd_update(ModelParams& params, const GradientSet& grads, double lr) {
    std::vector<double*> values = param_values(params);
    if (values.size() != grads.size()) {
        throw std::invalid_argument("sgd_update: gradient length " +
                                    std::to_string(grads.size()) + " does not match " +
                                    std::to_string(values.size()) + " parameters");
    }
    for (std::size_t k = 0; k < values.size(); ++k) *values[k] -= lr * grads[k];
}

namespace {

double glorot_bound(std::size_t fan_in, std::size_t fan_out) {
    return std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
}

void draw_matrix(Matrix& m, SeededRng& rng, std::size_t fan_in, std::size_t fan_out) {
    double r = glorot_bound(fan_in, fan_out);
    for (std::size_t k = 0; k < m.size(); ++k) m.data()[k] = rng.uniform(-r, r);
}

void draw_vector(Vector& v, SeededRng& rng, std::size_t fan_in, std::size_t fan_out) {
    double r = glorot_bound(fan_in, fan_out);
    for (double& x : v) x = rng.uniform(-r, r);
}

void draw_lstm_weights(LstmParams& p, SeededRng& rng, Vector* w_ci, Vector* w_cf, Vector* w_co) {
    std::size_t n = p.n_h;
    draw_matrix(p.w_xi, rng, 2, n);
    draw_matrix(p.w_hi, rng, n, n);
    if (w_ci) draw_vector(*w_ci, rng, n, n);
    draw_matrix(p.w_xf, rng, 2, n);
    draw_matrix(p.w_hf, rng, n, n);
    if (w_cf) draw_vector(*w_cf, rng, n, n);
    draw_matrix(p.w_xc, rng, 2, n);
    draw_matrix(p.w_hc, rng, n, n);
    draw_matrix(p.w_xo, rng, 2, n);
    draw_matrix(p.w_ho, rng, n, n);
    if (w_co) draw_vector(*w_co, rng, n, n);
    draw_vector(p.w_out, rng, n, 1);
}

} // namespace

ModelParams init_params(ModelKind kind, std::size_t input_width, std::uint64_t seed,
                        std::size_t lstm_hidden) {
    SeededRng rng(seed);
    switch (kind) {
        case ModelKind::ANN:
        case ModelKind::DNN: {
            FeedforwardParams p = make_feedforward_shape(kind, input_width);
            for (DenseLayer& layer : p.layers) {
                draw_matrix(layer.w, rng, layer.w.cols(), layer.w.rows());
            }
            return p;
        }
        case ModelKind::LSTM: {
            LstmParams p = make_lstm_shape(lstm_hidden);
            draw_lstm_weights(p, rng, nullptr, nullptr, nullptr);
            return p;
        }
        case ModelKind::LSTM_PC: {
            LstmPcParams p = make_lstm_pc_shape(lstm_hidden);
            draw_lstm_weights(p.base, rng, &p.w_ci, &p.w_cf, &p.w_co);
            return p;
        }
        case ModelKind::ELM:
            throw std::invalid_argument("elm is initialized by elm_fit, not init_params");
    }
    throw std::logic_error("unreachable model kind");
}

std::pair<ModelParams, LossHistory> train_iterative(ModelKind kind, const SampleSet& samples,
                                                    const TrainConfig& config,
                                                    std::size_t lstm_hidden) {
    if (samples.size() == 0) throw DataError("train_iterative: empty sample set");
    if (!(config.learning_rate > 0.0)) {
        throw std::invalid_argument("learning rate must be positive");
    }

    ModelParams params = init_params(kind, samples.inputs.cols(), config.seed, lstm_hidden);
    long long total_epochs = scaled_epochs(config);
    LossHistory history;
    history.epoch_mse.reserve(static_cast<std::size_t>(total_epochs));

    for (long long epoch = 1; epoch <= total_epochs; ++epoch) {
        double loss_sum = 0.0;
        for (std::size_t s = 0; s < samples.size(); ++s) {
            Vector x = samples.input_row(s);
            double y = samples.targets[s];
            double yhat = predict(params, x);
            loss_sum += mse_loss(yhat, y);
            GradientSet grads = model_gradient(params, x, y);
            sgd_update(params, grads, config.learning_rate);
        }
        double epoch_loss = loss_sum / static_cast<double>(samples.size());
        if (!std::isfinite(epoch_loss)) {
            throw DivergenceError("training loss became non-finite", epoch);
        }
        history.epoch_mse.push_back(epoch_loss);
    }
    return {std::move(params), std::move(history)};
}

ElmParams elm_fit(const SampleSet& samples, std::size_t n_hidden, std::uint64_t seed) {
    if (samples.size() == 0) throw DataError("elm_fit: empty sample set");
    if (n_hidden < 1) throw std::invalid_argument("elm_fit: n_hidden must be >= 1");

    const std::size_t s = samples.size();
    const std::size_t d = samples.inputs.cols();
    SeededRng rng(seed);
    ElmParams p{uniform_matrix(rng, n_hidden, d, -1.0, 1.0),
                uniform_vector(rng, n_hidden, -1.0, 1.0), Vector(n_hidden, 0.0)};

    // hidden activations G (s x n)
    Matrix g(s, n_hidden);
    for (std::size_t j = 0; j < s; ++j) {
        for (std::size_t k = 0; k < n_hidden; ++k) {
            double z = p.bias[k];
            for (std::size_t c = 0; c < d; ++c) z += p.w_in(k, c) * samples.inputs(j, c);
            g(j, k) = sigmoid(z);
        }
    }

    // ridge-stabilized normal equations (G^T G + lambda I) alpha = G^T C
    Matrix gtg(n_hidden, n_hidden);
    Vector gtc(n_hidden, 0.0);
    for (std::size_t j = 0; j < s; ++j) {
        for (std::size_t a = 0; a < n_hidden; ++a) {
            const double gja = g(j, a);
            gtc[a] += gja * samples.targets[j];
            for (std::size_t b = 0; b < n_hidden; ++b) gtg(a, b) += gja * g(j, b);
        }
    }
    double trace = 0.0;
    for (std::size_t k = 0; k < n_hidden; ++k) trace += gtg(k, k);

    // The ridge term only has to keep the Cholesky pivots positive; anything
    // larger biases alpha by O(lambda * |alpha|) and spoils least-squares
    // optimality on ill-conditioned hidden layers. Start tiny and back off
    // upward only if the factorization actually fails.
    Matrix regularized(n_hidden, n_hidden);
    double lambda = 1e-12 * trace / static_cast<double>(n_hidden);
    for (int attempt = 0;; ++attempt) {
        regularized = gtg;
        for (std::size_t k = 0; k < n_hidden; ++k) regularized(k, k) += lambda;
        try {
            p.out_w = cholesky_solve(regularized, gtc);
            break;
        } catch (const std::runtime_error&) {
            if (attempt >= 2) throw;
            lambda *= 1e4;
        }
    }
    // Two refinement passes against the unregularized normal equations remove
    // most of the remaining ridge bias.
    for (int pass = 0; pass < 2; ++pass) {
        Vector residual = gtc;
        for (std::size_t a = 0; a < n_hidden; ++a) {
            for (std::size_t b = 0; b < n_hidden; ++b) {
                residual[a] -= gtg(a, b) * p.out_w[b];
            }
        }
        Vector correction = cholesky_solve(regularized, std::move(residual));
        for (std::size_t k = 0; k < n_hidden; ++k) p.out_w[k] += correction[k];
    }
    return p;
}

ElmEnsemble fit_elm_ensemble(const SampleSet& samples, std::size_t n_hidden,
                             std::uint64_t base_seed) {
    ElmEnsemble ensemble;
    for (std::uint64_t member = 0; member < 3; ++member) {
        ensemble.members.push_back(elm_fit(samples, n_hidden, mix_seeds(base_seed, member)));
    }
    return ensemble;
}

double elm_ensemble_predict(const SampleSet& samples, std::size_t n_hidden,
                            std::uint64_t base_seed, const Vector& x) {
    return elm_ensemble_predict(fit_elm_ensemble(samples, n_hidden, base_seed), x);
}

} // namespace skycast
