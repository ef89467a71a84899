#include "skycast/models.hpp"

#include <stdexcept>

#include "skycast/activations.hpp"
#include "skycast/errors.hpp"

namespace skycast {

namespace {

void check_length(const char* what, std::size_t got, std::size_t want) {
    if (got != want) {
        throw std::invalid_argument(std::string(what) + ": length " + std::to_string(got) +
                                    ", expected " + std::to_string(want));
    }
}

Vector gate_preact(const Matrix& w_x, const Vector& x, const Matrix& w_h, const Vector& h_prev,
                   const Vector& b) {
    Vector pre = matvec(w_x, x);
    Vector rec = matvec(w_h, h_prev);
    for (std::size_t k = 0; k < pre.size(); ++k) pre[k] += rec[k] + b[k];
    return pre;
}

} // namespace

std::string model_kind_name(ModelKind kind) {
    switch (kind) {
        case ModelKind::ANN: return "ann";
        case ModelKind::DNN: return "dnn";
        case ModelKind::ELM: return "elm";
        case ModelKind::LSTM: return "lstm";
        case ModelKind::LSTM_PC: return "lstm_pc";
    }
    throw std::logic_error("unreachable model kind");
}

ModelKind parse_model_kind(const std::string& name) {
    for (ModelKind kind : kAllModelKinds) {
        if (model_kind_name(kind) == name) return kind;
    }
    throw DataError("unknown model kind '" + name + "'");
}

bool is_recurrent(ModelKind kind) {
    return kind == ModelKind::LSTM || kind == ModelKind::LSTM_PC;
}

FeedforwardParams make_feedforward_shape(ModelKind kind, std::size_t input_width,
                                         std::size_t hidden_width) {
    if (kind != ModelKind::ANN && kind != ModelKind::DNN) {
        throw std::invalid_argument("feedforward shape requires ann or dnn");
    }
    FeedforwardParams params;
    params.kind = kind;
    std::size_t hidden_layers = kind == ModelKind::ANN ? 1 : 2;
    std::size_t in = input_width;
    for (std::size_t l = 0; l < hidden_layers; ++l) {
        params.layers.push_back({Matrix(hidden_width, in), Vector(hidden_width, 0.0)});
        in = hidden_width;
    }
    params.layers.push_back({Matrix(1, in), Vector(1, 0.0)});
    return params;
}

double feedforward_forward(const FeedforwardParams& params, const Vector& x,
                           FeedforwardCache* cache) {
    if (params.layers.empty()) throw std::invalid_argument("feedforward model has no layers");
    check_length("feedforward input", x.size(), params.layers.front().w.cols());
    Vector a = x;
    if (cache) {
        cache->acts.clear();
        cache->acts.push_back(a);
    }
    for (const DenseLayer& layer : params.layers) {
        Vector z = matvec(layer.w, a);
        for (std::size_t k = 0; k < z.size(); ++k) z[k] = sigmoid(z[k] + layer.b[k]);
        a = std::move(z);
        if (cache) cache->acts.push_back(a);
    }
    if (a.size() != 1) throw std::invalid_argument("feedforward output layer must have one node");
    return a[0];
}

double elm_predict(const ElmParams& params, const Vector& x) {
    check_length("elm input", x.size(), params.w_in.cols());
    Vector g = matvec(params.w_in, x);
    for (std::size_t k = 0; k < g.size(); ++k) g[k] = sigmoid(g[k] + params.bias[k]);
    return dot(params.out_w, g);
}

double elm_ensemble_predict(const ElmEnsemble& ensemble, const Vector& x) {
    if (ensemble.members.empty()) throw std::invalid_argument("empty elm ensemble");
    double sum = 0.0;
    for (const ElmParams& member : ensemble.members) sum += elm_predict(member, x);
    return sum / static_cast<double>(ensemble.members.size());
}

LstmParams make_lstm_shape(std::size_t n_h) {
    LstmParams p;
    p.n_h = n_h;
    p.w_xi = Matrix(n_h, 2);
    p.w_xf = Matrix(n_h, 2);
    p.w_xc = Matrix(n_h, 2);
    p.w_xo = Matrix(n_h, 2);
    p.w_hi = Matrix(n_h, n_h);
    p.w_hf = Matrix(n_h, n_h);
    p.w_hc = Matrix(n_h, n_h);
    p.w_ho = Matrix(n_h, n_h);
    p.b_i = Vector(n_h, 0.0);
    p.b_f = Vector(n_h, 0.0);
    p.b_c = Vector(n_h, 0.0);
    p.b_o = Vector(n_h, 0.0);
    p.w_out = Vector(n_h, 0.0);
    p.b_out = 0.0;
    return p;
}

LstmPcParams make_lstm_pc_shape(std::size_t n_h) {
    LstmPcParams p;
    p.base = make_lstm_shape(n_h);
    p.w_ci = Vector(n_h, 0.0);
    p.w_cf = Vector(n_h, 0.0);
    p.w_co = Vector(n_h, 0.0);
    return p;
}

StepCache lstm_step(const LstmParams& params, const Vector& x, const Vector& h_prev,
                    const Vector& c_prev) {
    std::size_t n = params.n_h;
    check_length("lstm step input", x.size(), params.w_xi.cols());
    check_length("lstm h_prev", h_prev.size(), n);
    check_length("lstm c_prev", c_prev.size(), n);

    StepCache s;
    s.x = x;
    s.h_prev = h_prev;
    s.c_prev = c_prev;
    s.i = gate_preact(params.w_xi, x, params.w_hi, h_prev, params.b_i);
    s.f = gate_preact(params.w_xf, x, params.w_hf, h_prev, params.b_f);
    s.g = gate_preact(params.w_xc, x, params.w_hc, h_prev, params.b_c);
    s.o = gate_preact(params.w_xo, x, params.w_ho, h_prev, params.b_o);
    s.c.resize(n);
    s.tanh_c.resize(n);
    s.h.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        s.i[k] = sigmoid(s.i[k]);
        s.f[k] = sigmoid(s.f[k]);
        s.g[k] = tanh_act(s.g[k]);
        s.o[k] = sigmoid(s.o[k]);
        s.c[k] = s.f[k] * c_prev[k] + s.i[k] * s.g[k];
        s.tanh_c[k] = tanh_act(s.c[k]);
        s.h[k] = s.o[k] * s.tanh_c[k];
    }
    return s;
}

StepCache lstm_pc_step(const LstmPcParams& params, const Vector& x, const Vector& h_prev,
                       const Vector& c_prev) {
    const LstmParams& b = params.base;
    std::size_t n = b.n_h;
    check_length("lstm step input", x.size(), b.w_xi.cols());
    check_length("lstm h_prev", h_prev.size(), n);
    check_length("lstm c_prev", c_prev.size(), n);

    StepCache s;
    s.x = x;
    s.h_prev = h_prev;
    s.c_prev = c_prev;
    s.i = gate_preact(b.w_xi, x, b.w_hi, h_prev, b.b_i);
    s.f = gate_preact(b.w_xf, x, b.w_hf, h_prev, b.b_f);
    s.g = gate_preact(b.w_xc, x, b.w_hc, h_prev, b.b_c);
    s.o = gate_preact(b.w_xo, x, b.w_ho, h_prev, b.b_o);
    s.c.resize(n);
    s.tanh_c.resize(n);
    s.h.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        // input and forget gates peek at the old cell state
        s.i[k] = sigmoid(s.i[k] + params.w_ci[k] * c_prev[k]);
        s.f[k] = sigmoid(s.f[k] + params.w_cf[k] * c_prev[k]);
        s.g[k] = tanh_act(s.g[k]);
        s.c[k] = s.f[k] * c_prev[k] + s.i[k] * s.g[k];
        // the output gate peeks at the new cell state
        s.o[k] = sigmoid(s.o[k] + params.w_co[k] * s.c[k]);
        s.tanh_c[k] = tanh_act(s.c[k]);
        s.h[k] = s.o[k] * s.tanh_c[k];
    }
    return s;
}

namespace {

template <typename Params, typename StepFn>
SequenceCache run_sequence(const Params& params, std::size_t n_h, const Vector& window,
                           const Vector& w_out, double b_out, StepFn step) {
    if (window.size() < 2 || window.size() % 2 != 0) {
        throw std::invalid_argument("sequence window length " + std::to_string(window.size()) +
                                    " is not an even count of lagged (T, H) values");
    }
    std::size_t lags = window.size() / 2;
    SequenceCache cache;
    cache.steps.reserve(lags);
    Vector h(n_h, 0.0), c(n_h, 0.0);
    for (std::size_t t = 0; t < lags; ++t) {
        Vector x{window[t], window[lags + t]};
        StepCache s = step(params, x, h, c);
        h = s.h;
        c = s.c;
        cache.steps.push_back(std::move(s));
    }
    cache.yhat = dot(w_out, h) + b_out;
    return cache;
}

void check_window_spec(const Vector& window, const WindowSpec& spec) {
    std::size_t want = static_cast<std::size_t>(spec.input_width());
    if (window.size() != want) {
        throw std::invalid_argument("window length " + std::to_string(window.size()) +
                                    " does not match testing " + std::to_string(spec.testing_id) +
                                    " (expected " + std::to_string(want) + ")");
    }
}

} // namespace

SequenceCache sequence_forward(const LstmParams& params, const Vector& window) {
    return run_sequence(params, params.n_h, window, params.w_out, params.b_out,
                        [](const LstmParams& p, const Vector& x, const Vector& h,
                           const Vector& c) { return lstm_step(p, x, h, c); });
}

SequenceCache sequence_forward(const LstmPcParams& params, const Vector& window) {
    return run_sequence(params, params.base.n_h, window, params.base.w_out, params.base.b_out,
                        [](const LstmPcParams& p, const Vector& x, const Vector& h,
                           const Vector& c) { return lstm_pc_step(p, x, h, c); });
}

SequenceCache sequence_forward(const LstmParams& params, const Vector& window,
                               const WindowSpec& spec) {
    check_window_spec(window, spec);
    return sequence_forward(params, window);
}

SequenceCache sequence_forward(const LstmPcParams& params, const Vector& window,
                               const WindowSpec& spec) {
    check_window_spec(window, spec);
    return sequence_forward(params, window);
}

ModelKind model_kind(const ModelParams& params) {
    return std::visit(
        [](const auto& p) -> ModelKind {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, FeedforwardParams>) return p.kind;
            else if constexpr (std::is_same_v<T, ElmParams>) return ModelKind::ELM;
            else if constexpr (std::is_same_v<T, ElmEnsemble>) return ModelKind::ELM;
            else if constexpr (std::is_same_v<T, LstmParams>) return ModelKind::LSTM;
            else return ModelKind::LSTM_PC;
        },
        params);
}

double predict(const ModelParams& params, const Vector& window) {
    return std::visit(
        [&](const auto& p) -> double {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, FeedforwardParams>) {
                return feedforward_forward(p, window);
            } else if constexpr (std::is_same_v<T, ElmParams>) {
                return elm_predict(p, window);
            } else if constexpr (std::is_same_v<T, ElmEnsemble>) {
                return elm_ensemble_predict(p, window);
            } else {
                return sequence_forward(p, window).yhat;
            }
        },
        params);
}

namespace {

void append_matrix(std::vector<double*>& out, Matrix& m) {
    double* p = m.data();
    for (std::size_t k = 0; k < m.rows() * m.cols(); ++k) out.push_back(p + k);
}

void append_vector(std::vector<double*>& out, Vector& v) {
    for (double& x : v) out.push_back(&x);
}

} // namespace

std::vector<double*> param_values(FeedforwardParams& params) {
    std::vector<double*> out;
    for (DenseLayer& layer : params.layers) {
        append_matrix(out, layer.w);
        append_vector(out, layer.b);
    }
    return out;
}

std::vector<double*> param_values(LstmParams& params) {
    std::vector<double*> out;
    append_matrix(out, params.w_xi);
    append_matrix(out, params.w_hi);
    append_vector(out, params.b_i);
    append_matrix(out, params.w_xf);
    append_matrix(out, params.w_hf);
    append_vector(out, params.b_f);
    append_matrix(out, params.w_xc);
    append_matrix(out, params.w_hc);
    append_vector(out, params.b_c);
    append_matrix(out, params.w_xo);
    append_matrix(out, params.w_ho);
    append_vector(out, params.b_o);
    append_vector(out, params.w_out);
    out.push_back(&params.b_out);
    return out;
}

std::vector<double*> param_values(LstmPcParams& params) {
    LstmParams& b = params.base;
    std::vector<double*> out;
    append_matrix(out, b.w_xi);
    append_matrix(out, b.w_hi);
    append_vector(out, params.w_ci);
    append_vector(out, b.b_i);
    append_matrix(out, b.w_xf);
    append_matrix(out, b.w_hf);
    append_vector(out, params.w_cf);
    append_vector(out, b.b_f);
    append_matrix(out, b.w_xc);
    append_matrix(out, b.w_hc);
    append_vector(out, b.b_c);
    append_matrix(out, b.w_xo);
    append_matrix(out, b.w_ho);
    append_vector(out, params.w_co);
    append_vector(out, b.b_o);
    append_vector(out, b.w_out);
    out.push_back(&b.b_out);
    return out;
}

std::vector<double*> param_values(ModelParams& params) {
    return std::visit(
        [](auto& p) -> std::vector<double*> {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, FeedforwardParams> || std::is_same_v<T, LstmParams> ||
                          std::is_same_v<T, LstmPcParams>) {
                return param_values(p);
            } else {
                throw std::invalid_argument("elm parameters are not gradient-trainable");
            }
        },
        params);
}

std::size_t param_count(const ModelParams& params) {
    return param_values(const_cast<ModelParams&>(params)).size();
}

} // namespace skycast
