#pragma once

#include <string>
#include <variant>
#include <vector>

#include "skycast/linalg.hpp"
#include "skycast/windows.hpp"

namespace skycast {

enum class ModelKind { ANN, DNN, ELM, LSTM, LSTM_PC };

// Stable ordering used for report tie-breaks.
inline constexpr ModelKind kAllModelKinds[] = {ModelKind::ANN, ModelKind::DNN, ModelKind::ELM,
                                               ModelKind::LSTM, ModelKind::LSTM_PC};

std::string model_kind_name(ModelKind kind);
ModelKind parse_model_kind(const std::string& name);
bool is_recurrent(ModelKind kind);

// --- feedforward (ANN: in-3-1, DNN: in-3-3-1); sigmoid at every layer ---

struct DenseLayer {
    Matrix w; // out x in
    Vector b; // out

    bool operator==(const DenseLayer&) const = default;
};

struct FeedforwardParams {
    ModelKind kind = ModelKind::ANN;
    std::vector<DenseLayer> layers;

    bool operator==(const FeedforwardParams&) const = default;

    std::size_t input_width() const { return layers.front().w.cols(); }
};

FeedforwardParams make_feedforward_shape(ModelKind kind, std::size_t input_width,
                                         std::size_t hidden_width = 3);

struct FeedforwardCache {
    // acts[0] is the input; acts[l + 1] is the sigmoid output of layer l.
    std::vector<Vector> acts;
};

double feedforward_forward(const FeedforwardParams& params, const Vector& x,
                           FeedforwardCache* cache = nullptr);

// --- extreme learning machine ---

struct ElmParams {
    Matrix w_in;  // n x d, frozen after the random draw
    Vector bias;  // n, frozen
    Vector out_w; // n, least-squares solved

    bool operator==(const ElmParams&) const = default;
};

double elm_predict(const ElmParams& params, const Vector& x);

// Three random-restart members; predictions are averaged.
struct ElmEnsemble {
    std::vector<ElmParams> members;

    bool operator==(const ElmEnsemble&) const = default;
};

double elm_ensemble_predict(const ElmEnsemble& ensemble, const Vector& x);

// --- LSTM / LSTM with peephole connections ---

struct LstmParams {
    std::size_t n_h = 0;
    Matrix w_xi, w_xf, w_xc, w_xo; // n_h x 2
    Matrix w_hi, w_hf, w_hc, w_ho; // n_h x n_h
    Vector b_i, b_f, b_c, b_o;     // n_h
    Vector w_out;                  // n_h, linear readout
    double b_out = 0.0;

    bool operator==(const LstmParams&) const = default;
};

struct LstmPcParams {
    LstmParams base;
    Vector w_ci, w_cf, w_co; // n_h, elementwise peepholes

    bool operator==(const LstmPcParams&) const = default;
};

LstmParams make_lstm_shape(std::size_t n_h);
LstmPcParams make_lstm_pc_shape(std::size_t n_h);

struct StepCache {
    Vector x, h_prev, c_prev;
    Vector i, f, g, c, o, tanh_c, h; // g is the candidate cell value
};

StepCache lstm_step(const LstmParams& params, const Vector& x, const Vector& h_prev,
                    const Vector& c_prev);
StepCache lstm_pc_step(const LstmPcParams& params, const Vector& x, const Vector& h_prev,
                       const Vector& c_prev);

struct SequenceCache {
    std::vector<StepCache> steps;
    double yhat = 0.0;
};

// window holds 2L values: T lags oldest-first, then H lags oldest-first.
// Steps consume pairs (T_lag, H_lag); h_0 = c_0 = 0; yhat = w_out . h_L + b_out.
SequenceCache sequence_forward(const LstmParams& params, const Vector& window);
SequenceCache sequence_forward(const LstmPcParams& params, const Vector& window);
SequenceCache sequence_forward(const LstmParams& params, const Vector& window,
                               const WindowSpec& spec);
SequenceCache sequence_forward(const LstmPcParams& params, const Vector& window,
                               const WindowSpec& spec);

// --- unified parameter handle ---

using ModelParams = std::variant<FeedforwardParams, ElmParams, ElmEnsemble, LstmParams,
                                 LstmPcParams>;

ModelKind model_kind(const ModelParams& params);

// Normalized-space prediction from one input window.
double predict(const ModelParams& params, const Vector& window);

// Pointers to every trainable scalar in canonical order (stable across calls).
// Used by SGD updates, finite-difference checks, and persistence.
std::vector<double*> param_values(FeedforwardParams& params);
std::vector<double*> param_values(LstmParams& params);
std::vector<double*> param_values(LstmPcParams& params);
std::vector<double*> param_values(ModelParams& params);

std::size_t param_count(const ModelParams& params);

} // namespace skycast
