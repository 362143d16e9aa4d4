#include <rtnn/bench/bench.hpp>
#include <rtnn/error.hpp>
#include <rtnn/model/model.hpp>
#include <rtnn/model/static_model.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>

namespace rtnn::bench {

namespace {

using Frames = std::vector<std::vector<double>>;

void check_frame_sizes(const IoFixture& fx, std::size_t in_size, std::size_t out_size) {
    for (std::size_t t = 0; t < fx.input.size(); ++t) {
        if (fx.input[t].size() != in_size)
            throw ConfigError("fixture input frame " + std::to_string(t) + " has " +
                              std::to_string(fx.input[t].size()) + " values, model expects " +
                              std::to_string(in_size));
        if (fx.expected_output[t].size() != out_size)
            throw ConfigError("fixture expected frame " + std::to_string(t) + " has " +
                              std::to_string(fx.expected_output[t].size()) + " values, model produces " +
                              std::to_string(out_size));
    }
}

template <typename T, typename Forward>
Frames stream(const Frames& input, std::size_t in_size, Forward&& forward) {
    Frames out;
    out.reserve(input.size());
    std::vector<T> x(in_size);
    for (const auto& frame : input) {
        std::transform(frame.begin(), frame.end(), x.begin(), [](double v) { return static_cast<T>(v); });
        const auto y = forward(x.data());
        out.emplace_back(y.begin(), y.end());
    }
    return out;
}

template <typename T>
Frames run_dynamic(const ModelSpec& spec, const Frames& input) {
    auto model = Model<T>::load(spec);
    model.reset();
    return stream<T>(input, model.in_size(),
                     [&](const T* x) { return model.forward(std::span<const T>(x, model.in_size())); });
}

template <typename M>
Frames run_static(const ModelSpec& spec, const Frames& input) {
    auto model = std::make_unique<M>();
    model->load(spec);
    model->reset();
    return stream<typename M::value_type>(input, M::in_size, [&](const typename M::value_type* x) {
        return model->forward(std::span<const typename M::value_type, M::in_size>(x, M::in_size));
    });
}

struct StaticEntry {
    const char* name;
    Precision precision;
    Frames (*run)(const ModelSpec&, const Frames&);
};

template <typename T>
using IdentityDense = ModelT<T, 3, 3, DenseT<T, 3, 3>>;
template <typename T>
using Dense3x4 = ModelT<T, 3, 4, DenseT<T, 3, 4>>;
template <typename T>
using DenseTanh =ModelT<T, 3, 4, DenseT<T, 3, 4>, TanhActivationT<T, 4>>;
template <typename T>
using TwoDense = ModelT<T, 3, 1, DenseT<T, 3, 4>, TanhActivationT<T, 4>, DenseT<T, 4, 1>>;
template <typename T>
using ConvK3D2 = ModelT<T, 1, 4, Conv1DT<T, 1, 4, 3, 2>>;
template <typename T>
using Lstm8 = ModelT<T, 1, 8, LSTMLayerT<T, 1, 8>>;
template <typename T>
using Gru8 = ModelT<T, 1, 8, GRULayerT<T, 1, 8>>;

template <typename T>
void add_entries(std::vector<StaticEntry>& out) {
    const Precision p = precision_of<T>;
    out.push_back({"dense 3x3", p, &run_static<IdentityDense<T>>});
    out.push_back({"dense 3x4", p, &run_static<Dense3x4<T>>});
    out.push_back({"dense 3x4 + tanh", p, &run_static<DenseTanh<T>>});
    out.push_back({"dense 3x4 + tanh + dense 4x1", p, &run_static<TwoDense<T>>});
    out.push_back({"conv1d 1x4 k3 d2", p, &run_static<ConvK3D2<T>>});
    out.push_back({"lstm 1x8", p, &run_static<Lstm8<T>>});
    out.push_back({"gru 1x8", p, &run_static<Gru8<T>>});
}

const std::vector<StaticEntry>& catalog() {
    static const std::vector<StaticEntry> entries = [] {
        std::vector<StaticEntry> e;
        add_entries<float>(e);
        add_entries<double>(e);
        return e;
    }();
    return entries;
}

Frames run_static_catalog(const ModelSpec& spec, const Frames& input) {
    // The candidate whose mismatch came latest is the most useful to report.
    std::optional<ArchitectureMismatch> best;
    for (const StaticEntry& entry : catalog()) {
        if (entry.precision != spec.precision) continue;
        try {
            return entry.run(spec, input);
        } catch (const ArchitectureMismatch& e) {
            if (!best || e.layer() > best->layer()) best = e;
        }
    }
    if (best) throw ArchitectureMismatch(best->layer(), std::string("no compiled-in static model matches (") +
                                                            best->what() + ")");
    throw ArchitectureMismatch(0, "no compiled-in static model for this precision");
}

} // namespace

std::vector<std::string> static_catalog() {
    std::vector<std::string> names;
    for (const auto& e : catalog()) names.push_back(std::string(e.name) + " (" + std::string(to_string(e.precision)) + ")");
    return names;
}

VerifyReport verify(const ModelSpec& spec, const IoFixture& fixture, Api api, std::optional<double> tolerance_override) {
    validate_chain(spec);
    if (fixture.input.size() != fixture.expected_output.size())
        throw ConfigError("fixture input and expected_output lengths differ");
    check_frame_sizes(fixture, spec.in_size, spec.out_size());

    VerifyReport report;
    report.tolerance = tolerance_override.value_or(fixture.tolerance);
    if (!(report.tolerance > 0.0)) throw ConfigError("tolerance must be > 0");
    report.frames = fixture.input.size();

    Frames actual;
    if (api == Api::dynamic) {
        actual = spec.precision == Precision::f32 ? run_dynamic<float>(spec, fixture.input)
                                                  : run_dynamic<double>(spec, fixture.input);
    } else {
        actual = run_static_catalog(spec, fixture.input);
    }

    for (std::size_t t = 0; t < actual.size(); ++t) {
        for (std::size_t j = 0; j < actual[t].size(); ++j) {
            const double y = actual[t][j];
            const double e = fixture.expected_output[t][j];
            const double abs_err = std::abs(y - e);
            const double rel_err = abs_err / std::max(std::abs(e), 1.0);
            report.max_abs_error = std::max(report.max_abs_error, abs_err);
            report.max_rel_error = std::max(report.max_rel_error, rel_err);
            // Written so that NaN outputs fail.
            if (!(rel_err <= report.tolerance) && report.passed) {
                report.passed = false;
                report.first_failing_frame = t;
                report.first_failing_channel = j;
            }
        }
    }
    return report;
}

} // namespace rtnn::bench
