#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "skycast/errors.hpp"
#include "skycast/rng.hpp"
#include "skycast/training.hpp"

using namespace skycast;

namespace {

// Central finite differences over every trainable scalar, step 1e-6*max(1,|w|).
template <typename LossFn>
Vector finite_diff(ModelParams& params, LossFn loss) {
    std::vector<double*> ptrs = param_values(params);
    Vector fd(ptrs.size());
    for (std::size_t k = 0; k < ptrs.size(); ++k) {
        double w0 = *ptrs[k];
        double h = 1e-6 * std::max(1.0, std::abs(w0));
        *ptrs[k] = w0 + h;
        double lp = loss();
        *ptrs[k] = w0 - h;
        double lm = loss();
        *ptrs[k] = w0;
        fd[k] = (lp - lm) / (2.0 * h);
    }
    return fd;
}

// 1e-4 relative agreement with a 1e-7 absolute floor.
void check_grads_close(const Vector& analytic, const Vector& fd) {
    REQUIRE(analytic.size() == fd.size());
    for (std::size_t k = 0; k < analytic.size(); ++k) {
        double tol = std::max(1e-7, 1e-4 * std::max(std::abs(analytic[k]), std::abs(fd[k])));
        CHECK(std::abs(analytic[k] - fd[k]) <= tol);
    }
}

void randomize(ModelParams& params, SeededRng& rng, double bound = 0.8) {
    for (double* p : param_values(params)) *p = rng.uniform(-bound, bound);
}

SampleSet toy_samples(std::size_t count, std::size_t width, std::uint64_t seed) {
    SeededRng rng(seed);
    SampleSet set;
    set.inputs = uniform_matrix(rng, count, width, 0.05, 0.95);
    set.targets = uniform_vector(rng, count, 0.1, 0.9);
    set.raw_targets = set.targets;
    set.spec = WindowSpec::for_testing(width == 4 ? 1 : 3);
    set.norm = NormalizationParams{0.0, 1.0, 0.0, 1.0};
    return set;
}

double elm_residual(const ElmParams& p, const SampleSet& samples) {
    double sum = 0.0;
    for (std::size_t j = 0; j < samples.size(); ++j) {
        double e = elm_predict(p, samples.input_row(j)) - samples.targets[j];
        sum += e * e;
    }
    return sum;
}

// Hidden activation matrix rebuilt outside the library.
Matrix elm_design(const ElmParams& p, const SampleSet& samples) {
    Matrix g(samples.size(), p.bias.size());
    for (std::size_t j = 0; j < samples.size(); ++j) {
        Vector x = samples.input_row(j);
        for (std::size_t k = 0; k < p.bias.size(); ++k) {
            double z = p.bias[k];
            for (std::size_t c = 0; c < x.size(); ++c) z += p.w_in(k, c) * x[c];
            g(j, k) = 1.0 / (1.0 + std::exp(-z));
        }
    }
    return g;
}

} // namespace

TEST_CASE("mse loss arithmetic") {
    CHECK(mse_loss(1.0, 1.0) == 0.0);
    CHECK(mse_loss(2.0, 0.0) == 4.0);
    CHECK(mse_loss(0.3, 0.1) == doctest::Approx(0.04).epsilon(1e-15));
}

TEST_CASE("feedforward gradients match finite differences") {
    SeededRng rng(2001);
    for (int trial = 0; trial < 100; ++trial) {
        ModelKind kind = trial % 2 == 0 ? ModelKind::ANN : ModelKind::DNN;
        std::size_t width = trial % 4 < 2 ? 4 : 6;
        ModelParams params = make_feedforward_shape(kind, width);
        randomize(params, rng);
        Vector x = uniform_vector(rng, width, 0.0, 1.0);
        double y = rng.uniform(0.0, 1.0);

        GradientSet analytic =
            backprop_feedforward(std::get<FeedforwardParams>(params), x, y);
        Vector fd = finite_diff(params, [&] {
            return mse_loss(feedforward_forward(std::get<FeedforwardParams>(params), x), y);
        });
        check_grads_close(analytic, fd);
    }
}

TEST_CASE("zero prediction error gives exactly zero gradients") {
    FeedforwardParams p = make_feedforward_shape(ModelKind::ANN, 4);
    GradientSet g = backprop_feedforward(p, {0.2, 0.4, 0.6, 0.8}, 0.5);
    for (double v : g) CHECK(v == 0.0);
}

TEST_CASE("gradients are additive over duplicated samples") {
    SeededRng rng(2002);
    ModelParams params = make_feedforward_shape(ModelKind::DNN, 4);
    randomize(params, rng);
    Vector x = uniform_vector(rng, 4, 0.0, 1.0);
    const FeedforwardParams& p = std::get<FeedforwardParams>(params);
    GradientSet once = backprop_feedforward(p, x, 0.9);
    GradientSet twice = backprop_feedforward(p, x, 0.9);
    axpy(1.0, once, twice);
    for (std::size_t k = 0; k < once.size(); ++k) {
        CHECK(twice[k] == doctest::Approx(2.0 * once[k]).epsilon(1e-14));
    }
}

TEST_CASE("lstm gradients match finite differences") {
    SeededRng rng(2003);
    const std::size_t hidden[] = {1, 2, 4};
    for (int trial = 0; trial < 100; ++trial) {
        std::size_t n_h = hidden[trial % 3];
        std::size_t lags = trial % 2 == 0 ? 2 : 3;
        ModelParams params = make_lstm_shape(n_h);
        randomize(params, rng);
        Vector window = uniform_vector(rng, 2 * lags, 0.0, 1.0);
        double y = rng.uniform(0.0, 1.0);

        GradientSet analytic = bptt(std::get<LstmParams>(params), window, y);
        Vector fd = finite_diff(params, [&] {
            return mse_loss(sequence_forward(std::get<LstmParams>(params), window).yhat, y);
        });
        check_grads_close(analytic, fd);
    }
}

TEST_CASE("peephole lstm gradients match finite differences") {
    SeededRng rng(2004);
    const std::size_t hidden[] = {1, 2, 4};
    for (int trial = 0; trial < 100; ++trial) {
        std::size_t n_h = hidden[trial % 3];
        std::size_t lags = trial % 2 == 0 ? 2 : 3;
        ModelParams params = make_lstm_pc_shape(n_h);
        randomize(params, rng);
        Vector window = uniform_vector(rng, 2 * lags, 0.0, 1.0);
        double y = rng.uniform(0.0, 1.0);

        GradientSet analytic = bptt(std::get<LstmPcParams>(params), window, y);
        Vector fd = finite_diff(params, [&] {
            return mse_loss(sequence_forward(std::get<LstmPcParams>(params), window).yhat, y);
        });
        check_grads_close(analytic, fd);
    }
}

TEST_CASE("zero-peephole gradients equal plain lstm gradients on shared params") {
    SeededRng rng(2005);
    for (int trial = 0; trial < 30; ++trial) {
        std::size_t n_h = 1 + static_cast<std::size_t>(rng.next_u64() % 4);
        ModelParams lstm_params = make_lstm_shape(n_h);
        randomize(lstm_params, rng);
        const LstmParams& lstm = std::get<LstmParams>(lstm_params);

        LstmPcParams pc = make_lstm_pc_shape(n_h);
        pc.base = lstm;

        Vector window = uniform_vector(rng, 6, 0.0, 1.0);
        double y = rng.uniform(0.0, 1.0);
        GradientSet g_lstm = bptt(lstm, window, y);
        GradientSet g_pc = bptt(pc, window, y);

        // walk both canonical layouts, skipping the three peephole slices
        std::size_t n2 = n_h * n_h, nx = 2 * n_h;
        struct Seg {
            std::size_t len;
            bool peephole;
        };
        std::vector<Seg> pc_segs = {{nx, false},  {n2, false}, {n_h, true},  {n_h, false},
                                    {nx, false},  {n2, false}, {n_h, true},  {n_h, false},
                                    {nx, false},  {n2, false}, {n_h, false}, {nx, false},
                                    {n2, false},  {n_h, true}, {n_h, false}, {n_h, false},
                                    {1, false}};
        std::size_t i_pc = 0, i_lstm = 0;
        for (const Seg& seg : pc_segs) {
            for (std::size_t k = 0; k < seg.len; ++k, ++i_pc) {
                if (!seg.peephole) {
                    CHECK(std::abs(g_pc[i_pc] - g_lstm[i_lstm]) <= 1e-12);
                    ++i_lstm;
                }
            }
        }
        CHECK(i_pc == g_pc.size());
        CHECK(i_lstm == g_lstm.size());
    }
}

TEST_CASE("sgd update trivials") {
    ModelParams params = make_feedforward_shape(ModelKind::ANN, 4);
    SeededRng rng(2006);
    randomize(params, rng);
    ModelParams before = params;

    sgd_update(params, GradientSet(param_count(params), 0.0), 0.5);
    CHECK(params == before);

    GradientSet ones(param_count(params), 1.0);
    sgd_update(params, ones, 0.0);
    CHECK(params == before);

    // single-weight arithmetic: w' = 1 - 0.1*0.5 = 0.95
    FeedforwardParams tiny;
    tiny.kind = ModelKind::ANN;
    tiny.layers.push_back({Matrix(1, 1, 1.0), Vector(1, 0.0)});
    ModelParams tiny_params = tiny;
    sgd_update(tiny_params, GradientSet{0.5, 0.0}, 0.1);
    CHECK(std::get<FeedforwardParams>(tiny_params).layers[0].w(0, 0) ==
          doctest::Approx(0.95).epsilon(1e-15));

    CHECK_THROWS(sgd_update(params, GradientSet(3, 0.0), 0.1));
}

TEST_CASE("init_params is seeded and respects glorot bounds") {
    ModelParams a = init_params(ModelKind::LSTM_PC, 6, 999);
    ModelParams b = init_params(ModelKind::LSTM_PC, 6, 999);
    CHECK(a == b);
    ModelParams c = init_params(ModelKind::LSTM_PC, 6, 1000);
    CHECK(a != c);

    // feedforward first-layer bound sqrt(6/(4+3)), zero biases
    ModelParams ann = init_params(ModelKind::ANN, 4, 5);
    const FeedforwardParams& fp = std::get<FeedforwardParams>(ann);
    double r0 = std::sqrt(6.0 / 7.0);
    for (std::size_t k = 0; k < fp.layers[0].w.size(); ++k) {
        CHECK(std::abs(fp.layers[0].w.data()[k]) < r0);
    }
    for (const auto& layer : fp.layers) {
        for (double bv : layer.b) CHECK(bv == 0.0);
    }

    const LstmPcParams& pc = std::get<LstmPcParams>(a);
    double rx = std::sqrt(6.0 / (2.0 + 4.0));
    double rh = std::sqrt(6.0 / 8.0);
    for (std::size_t k = 0; k < pc.base.w_xi.size(); ++k) {
        CHECK(std::abs(pc.base.w_xi.data()[k]) < rx);
    }
    for (std::size_t k = 0; k < pc.base.w_hi.size(); ++k) {
        CHECK(std::abs(pc.base.w_hi.data()[k]) < rh);
    }
    for (double v : pc.w_ci) CHECK(std::abs(v) < rh);
    for (double v : pc.base.b_i) CHECK(v == 0.0);
    CHECK(pc.base.b_out == 0.0);

    CHECK_THROWS(init_params(ModelKind::ELM, 4, 1));
}

TEST_CASE("scaled epochs arithmetic") {
    CHECK(scaled_epochs({0.1, 2500, 0, 0.1}) == 250);
    CHECK(scaled_epochs({0.1, 7500, 0, 0.1}) == 750);
    CHECK(scaled_epochs({0.1, 5000, 0, 1.0}) == 5000);
    CHECK_THROWS(scaled_epochs({0.1, 0, 0, 1.0}));
    CHECK_THROWS(scaled_epochs({0.1, 100, 0, -1.0}));
}

TEST_CASE("training a single sample reduces its loss") {
    SampleSet samples = toy_samples(1, 4, 31);
    TrainConfig config{0.1, 500, 7, 1.0};
    auto [params, history] = train_iterative(ModelKind::ANN, samples, config);
    REQUIRE(history.epoch_mse.size() == 500);
    CHECK(history.epoch_mse.back() < history.epoch_mse.front());
    CHECK(history.epoch_mse.back() < 1e-3);
}

TEST_CASE("one small sgd step strictly decreases single-sample loss") {
    SeededRng rng(2007);
    for (ModelKind kind : {ModelKind::ANN, ModelKind::DNN, ModelKind::LSTM, ModelKind::LSTM_PC}) {
        ModelParams params = init_params(kind, 4, rng.next_u64());
        Vector x = uniform_vector(rng, 4, 0.1, 0.9);
        double y = 0.8;
        double before = mse_loss(predict(params, x), y);
        GradientSet g = model_gradient(params, x, y);
        double norm_sq = dot(g, g);
        REQUIRE(norm_sq > 0.0);
        sgd_update(params, g, 1e-4);
        double after = mse_loss(predict(params, x), y);
        CHECK(after < before);
    }
}

TEST_CASE("train_iterative is deterministic in the seed") {
    SampleSet samples = toy_samples(20, 6, 32);
    TrainConfig config{0.3, 40, 11, 1.0};
    auto [p1, h1] = train_iterative(ModelKind::DNN, samples, config);
    auto [p2, h2] = train_iterative(ModelKind::DNN, samples, config);
    CHECK(p1 == p2);
    CHECK(h1.epoch_mse == h2.epoch_mse);

    TrainConfig other = config;
    other.seed = 12;
    auto [p3, h3] = train_iterative(ModelKind::DNN, samples, other);
    CHECK(p1 != p3);
}

TEST_CASE("epoch_scale shrinks the executed epoch count") {
    SampleSet samples = toy_samples(5, 4, 33);
    TrainConfig config{0.01, 2500, 3, 0.01};
    auto [params, history] = train_iterative(ModelKind::LSTM, samples, config);
    CHECK(history.epoch_mse.size() == 25);
    for (double loss : history.epoch_mse) CHECK(std::isfinite(loss));
}

TEST_CASE("train_iterative rejects empty samples and reports divergence") {
    SampleSet empty;
    empty.inputs = Matrix(1, 4); // matrix cannot be empty; targets define size()
    empty.targets = {};
    empty.raw_targets = {};
    CHECK_THROWS_AS(train_iterative(ModelKind::ANN, empty, TrainConfig{}), DataError);

    SampleSet samples = toy_samples(10, 4, 34);
    TrainConfig wild{1e6, 50, 5, 1.0};
    try {
        train_iterative(ModelKind::LSTM, samples, wild);
        FAIL("expected divergence");
    } catch (const DivergenceError& e) {
        CHECK(e.epoch() >= 1);
        CHECK(e.epoch() <= 50);
        CHECK(std::string(e.what()).find("epoch") != std::string::npos);
    }
}

TEST_CASE("lstm training fits a repeatable pattern better than init") {
    SampleSet samples = toy_samples(30, 4, 35);
    // targets follow a linear rule of the inputs so there is signal to learn
    for (std::size_t j = 0; j < samples.size(); ++j) {
        Vector x = samples.input_row(j);
        samples.targets[j] = 0.2 + 0.3 * x[1] + 0.4 * x[3];
    }
    TrainConfig config{0.005, 300, 21, 1.0};
    auto [params, history] = train_iterative(ModelKind::LSTM_PC, samples, config);
    CHECK(history.epoch_mse.back() < 0.5 * history.epoch_mse.front());
}

TEST_CASE("elm with zero targets solves to zero output weights") {
    SampleSet samples = toy_samples(40, 4, 36);
    for (double& t : samples.targets) t = 0.0;
    ElmParams p = elm_fit(samples, 10, 77);
    for (double a : p.out_w) CHECK(std::abs(a) < 1e-6);
}

TEST_CASE("square well-conditioned elm interpolates") {
    SampleSet samples = toy_samples(4, 4, 5);
    ElmParams p = elm_fit(samples, 4, 86);
    CHECK(elm_residual(p, samples) < 1e-6);
}

TEST_CASE("elm first-order optimality") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        SampleSet samples = toy_samples(60, 6, 500 + seed);
        ElmParams p = elm_fit(samples, 10, 900 + seed);
        Matrix g = elm_design(p, samples);
        Vector resid(samples.size());
        for (std::size_t j = 0; j < samples.size(); ++j) {
            resid[j] = dot(g.row(j), p.out_w) - samples.targets[j];
        }
        Vector grad = matvec_transposed(g, resid); // G^T (G a - C)
        Vector gtc = matvec_transposed(g, samples.targets);
        double grad_inf = 0.0, gtc_inf = 0.0;
        for (double v : grad) grad_inf = std::max(grad_inf, std::abs(v));
        for (double v : gtc) gtc_inf = std::max(gtc_inf, std::abs(v));
        CHECK(grad_inf <= 1e-6 * gtc_inf);
    }
}

TEST_CASE("elm residual beats random perturbations") {
    SampleSet samples = toy_samples(100, 4, 38);
    ElmParams p = elm_fit(samples, 8, 79);
    double base = elm_residual(p, samples);
    SeededRng rng(2008);
    for (int trial = 0; trial < 1000; ++trial) {
        Vector delta = uniform_vector(rng, p.out_w.size(), -1.0, 1.0);
        double norm = std::sqrt(dot(delta, delta));
        for (double& d : delta) d *= 0.01 / norm;
        ElmParams q = p;
        axpy(1.0, delta, q.out_w);
        CHECK(elm_residual(q, samples) >= base);
    }
}

TEST_CASE("elm fit is deterministic and seed-sensitive") {
    SampleSet samples = toy_samples(30, 4, 39);
    CHECK(elm_fit(samples, 12, 5) == elm_fit(samples, 12, 5));
    CHECK(elm_fit(samples, 12, 5) != elm_fit(samples, 12, 6));
    CHECK_THROWS_AS(elm_fit(SampleSet{}, 5, 1), DataError);
}

TEST_CASE("elm ensemble uses three distinct derived seeds") {
    SampleSet samples = toy_samples(30, 4, 40);
    ElmEnsemble ens = fit_elm_ensemble(samples, 6, 123);
    REQUIRE(ens.members.size() == 3);
    CHECK(ens.members[0] != ens.members[1]);
    CHECK(ens.members[1] != ens.members[2]);

    Vector x = samples.input_row(0);
    double mean = (elm_predict(ens.members[0], x) + elm_predict(ens.members[1], x) +
                   elm_predict(ens.members[2], x)) /
                  3.0;
    CHECK(elm_ensemble_predict(ens, x) == doctest::Approx(mean).epsilon(1e-15));
    CHECK(elm_ensemble_predict(samples, 6, 123, x) == elm_ensemble_predict(ens, x));
}

TEST_CASE("model_gradient rejects elm") {
    ModelParams elm = ElmParams{Matrix(2, 4), Vector(2), Vector(2)};
    CHECK_THROWS(model_gradient(elm, Vector(4, 0.1), 0.5));
}
