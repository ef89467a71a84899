#include "skycast/model_io.hpp"

#include <fstream>
#include <sstream>

#include "skycast/config.hpp"
#include "skycast/errors.hpp"

namespace skycast {

namespace {

constexpr const char* kMagic = "skycast-model";
constexpr const char* kVersion = "v1";

// --- writing ---

void put_matrix(std::ostream& out, const char* name, const Matrix& m) {
    out << "matrix " << name << ' ' << m.rows() << ' ' << m.cols() << '\n';
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            if (c) out << ' ';
            out << format_double(m(r, c));
        }
        out << '\n';
    }
}

void put_vector(std::ostream& out, const char* name, const Vector& v) {
    out << "vector " << name << ' ' << v.size() << '\n';
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out << ' ';
        out << format_double(v[i]);
    }
    out << '\n';
}

void put_scalar(std::ostream& out, const char* name, double x) {
    out << "scalar " << name << '\n' << format_double(x) << '\n';
}

void put_elm_member(std::ostream& out, const ElmParams& p) {
    put_matrix(out, "w_in", p.w_in);
    put_vector(out, "bias", p.bias);
    put_vector(out, "out_w", p.out_w);
}

void put_lstm_core(std::ostream& out, const LstmParams& p) {
    out << "hidden " << p.n_h << '\n';
    put_matrix(out, "w_xi", p.w_xi);
    put_matrix(out, "w_hi", p.w_hi);
    put_vector(out, "b_i", p.b_i);
    put_matrix(out, "w_xf", p.w_xf);
    put_matrix(out, "w_hf", p.w_hf);
    put_vector(out, "b_f", p.b_f);
    put_matrix(out, "w_xc", p.w_xc);
    put_matrix(out, "w_hc", p.w_hc);
    put_vector(out, "b_c", p.b_c);
    put_matrix(out, "w_xo", p.w_xo);
    put_matrix(out, "w_ho", p.w_ho);
    put_vector(out, "b_o", p.b_o);
    put_vector(out, "w_out", p.w_out);
    put_scalar(out, "b_out", p.b_out);
}

// --- reading ---

struct Reader {
    std::ifstream in;
    std::string path;

    explicit Reader(const std::string& p) : in(p), path(p) {
        if (!in) throw DataError("cannot open model file '" + p + "'");
    }

    [[noreturn]] void fail(const std::string& why) {
        throw DataError("model file '" + path + "': " + why);
    }

    std::string word(const char* what) {
        std::string w;
        if (!(in >> w)) fail(std::string("unexpected end of file reading ") + what);
        return w;
    }

    void expect(const char* token) {
        std::string w = word(token);
        if (w != token) fail("expected '" + std::string(token) + "', found '" + w + "'");
    }

    std::size_t count(const char* what) {
        std::string w = word(what);
        try {
            return std::stoul(w);
        } catch (const std::exception&) {
            fail("bad " + std::string(what) + " '" + w + "'");
        }
    }

    double value(const char* what) {
        std::string w = word(what);
        return parse_double_str(w, what);
    }

    Matrix matrix(const char* name) {
        expect("matrix");
        expect(name);
        std::size_t r = count("rows"), c = count("cols");
        Matrix m(r, c);
        for (std::size_t i = 0; i < r * c; ++i) m.data()[i] = value(name);
        return m;
    }

    Vector vector(const char* name) {
        expect("vector");
        expect(name);
        std::size_t n = count("length");
        Vector v(n);
        for (double& x : v) x = value(name);
        return v;
    }

    double scalar(const char* name) {
        expect("scalar");
        expect(name);
        return value(name);
    }
};

ElmParams read_elm_member(Reader& r) {
    ElmParams p;
    p.w_in = r.matrix("w_in");
    p.bias = r.vector("bias");
    p.out_w = r.vector("out_w");
    if (p.bias.size() != p.w_in.rows() || p.out_w.size() != p.w_in.rows()) {
        r.fail("elm member shapes disagree");
    }
    return p;
}

LstmParams read_lstm_core(Reader& r) {
    r.expect("hidden");
    std::size_t n_h = r.count("hidden size");
    LstmParams p = make_lstm_shape(n_h);
    p.w_xi = r.matrix("w_xi");
    p.w_hi = r.matrix("w_hi");
    p.b_i = r.vector("b_i");
    p.w_xf = r.matrix("w_xf");
    p.w_hf = r.matrix("w_hf");
    p.b_f = r.vector("b_f");
    p.w_xc = r.matrix("w_xc");
    p.w_hc = r.matrix("w_hc");
    p.b_c = r.vector("b_c");
    p.w_xo = r.matrix("w_xo");
    p.w_ho = r.matrix("w_ho");
    p.b_o = r.vector("b_o");
    p.w_out = r.vector("w_out");
    p.b_out = r.scalar("b_out");
    if (p.w_xi.rows() != n_h || p.w_hi.cols() != n_h || p.w_out.size() != n_h) {
        r.fail("lstm tensor shapes disagree with the declared hidden size");
    }
    return p;
}

} // namespace

void save_model(const SavedModel& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write model file '" + path + "'");
    out << kMagic << ' ' << kVersion << '\n';
    out << "kind " << model_kind_name(model_kind(model.params)) << '\n';
    out << "testing " << model.spec.testing_id << '\n';
    out << "norm " << format_double(model.norm.t_min) << ' ' << format_double(model.norm.t_max)
        << ' ' << format_double(model.norm.h_min) << ' ' << format_double(model.norm.h_max)
        << '\n';

    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, FeedforwardParams>) {
                out << "layers " << p.layers.size() << '\n';
                for (std::size_t l = 0; l < p.layers.size(); ++l) {
                    std::string wn = "w" + std::to_string(l);
                    std::string bn = "b" + std::to_string(l);
                    put_matrix(out, wn.c_str(), p.layers[l].w);
                    put_vector(out, bn.c_str(), p.layers[l].b);
                }
            } else if constexpr (std::is_same_v<T, ElmParams>) {
                out << "members 1\n";
                put_elm_member(out, p);
            } else if constexpr (std::is_same_v<T, ElmEnsemble>) {
                out << "members " << p.members.size() << '\n';
                for (const ElmParams& member : p.members) put_elm_member(out, member);
            } else if constexpr (std::is_same_v<T, LstmParams>) {
                put_lstm_core(out, p);
            } else {
                put_lstm_core(out, p.base);
                put_vector(out, "w_ci", p.w_ci);
                put_vector(out, "w_cf", p.w_cf);
                put_vector(out, "w_co", p.w_co);
            }
        },
        model.params);
    out << "end\n";
    if (!out) throw DataError("write to model file '" + path + "' failed");
}

SavedModel load_model(const std::string& path) {
    Reader r(path);
    r.expect(kMagic);
    r.expect(kVersion);
    r.expect("kind");
    ModelKind kind = parse_model_kind(r.word("model kind"));
    r.expect("testing");
    int testing = static_cast<int>(r.count("testing id"));

    SavedModel model;
    model.spec = WindowSpec::for_testing(testing);
    r.expect("norm");
    model.norm.t_min = r.value("t_min");
    model.norm.t_max = r.value("t_max");
    model.norm.h_min = r.value("h_min");
    model.norm.h_max = r.value("h_max");

    switch (kind) {
        case ModelKind::ANN:
        case ModelKind::DNN: {
            r.expect("layers");
            std::size_t layer_count = r.count("layer count");
            std::size_t expected = kind == ModelKind::ANN ? 2 : 3;
            if (layer_count != expected) r.fail("wrong layer count for this kind");
            FeedforwardParams p;
            p.kind = kind;
            for (std::size_t l = 0; l < layer_count; ++l) {
                std::string wn = "w" + std::to_string(l);
                std::string bn = "b" + std::to_string(l);
                DenseLayer layer;
                layer.w = r.matrix(wn.c_str());
                layer.b = r.vector(bn.c_str());
                if (layer.b.size() != layer.w.rows()) r.fail("layer bias length mismatch");
                p.layers.push_back(std::move(layer));
            }
            model.params = std::move(p);
            break;
        }
        case ModelKind::ELM: {
            r.expect("members");
            std::size_t members = r.count("member count");
            if (members < 1) r.fail("elm ensemble needs at least one member");
            ElmEnsemble ensemble;
            for (std::size_t m = 0; m < members; ++m) {
                ensemble.members.push_back(read_elm_member(r));
            }
            model.params = std::move(ensemble);
            break;
        }
        case ModelKind::LSTM:
            model.params = read_lstm_core(r);
            break;
        case ModelKind::LSTM_PC: {
            LstmPcParams p;
            p.base = read_lstm_core(r);
            p.w_ci = r.vector("w_ci");
            p.w_cf = r.vector("w_cf");
            p.w_co = r.vector("w_co");
            if (p.w_ci.size() != p.base.n_h) r.fail("peephole length mismatch");
            model.params = std::move(p);
            break;
        }
    }
    r.expect("end");
    return model;
}

} // namespace skycast
