#include <rtnn/bench/bench.hpp>
#include <rtnn/error.hpp>
#include <rtnn/model/model.hpp>
#include <rtnn/model/static_model.hpp>

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <memory>
#include <random>

namespace rtnn::bench {

namespace {

using Sample = float;

// Input frames are drawn once and cycled, so very long signals at wide layer
// sizes do not need gigabytes of input.
constexpr std::size_t max_signal_pool_frames = std::size_t{1} << 16;

std::vector<double> random_values(std::mt19937_64& rng, std::size_t n, double scale) {
    std::uniform_real_distribution<double> dist(-scale, scale);
    std::vector<double> v(n);
    for (auto& x : v) x = static_cast<double>(static_cast<float>(dist(rng)));
    return v;
}

struct Signal {
    std::vector<Sample> pool;
    std::size_t channels = 0;
    std::size_t pool_frames = 0;

    const Sample* frame(std::size_t i) const noexcept { return pool.data() + (i % pool_frames) * channels; }
};

Signal make_signal(std::size_t channels, std::size_t frames, std::uint64_t seed) {
    Signal s;
    s.channels = channels;
    s.pool_frames = std::max<std::size_t>(1, std::min(frames, max_signal_pool_frames));
    s.pool.resize(s.pool_frames * channels);
    std::mt19937_64 rng(seed ^ 0x5157a1e5ull);
    std::uniform_real_distribution<Sample> dist(Sample{-1}, Sample{1});
    for (auto& x : s.pool) x = dist(rng);
    return s;
}

struct Timing {
    double t_process;
    std::uint64_t checksum;
};

// `step(frame)` runs one forward call and returns the output span.
template <typename Step, typename Reset>
Timing time_loop(Step&& step, Reset&& reset, const Signal& signal, std::size_t frames, std::size_t warmup_frames,
                 int runs) {
    using clock = std::chrono::steady_clock;

    reset();
    double sink = 0.0;
    for (std::size_t i = 0; i < warmup_frames; ++i) sink += step(signal.frame(i))[0];

    std::vector<double> times;
    times.reserve(static_cast<std::size_t>(runs));
    double checksum = 0.0;
    for (int r = 0; r < runs; ++r) {
        reset();
        double acc = 0.0;
        const auto start = clock::now();
        for (std::size_t i = 0; i < frames; ++i) {
            const auto y = step(signal.frame(i));
            for (std::size_t j = 0; j < y.size(); ++j) acc += y[j];
        }
        const auto stop = clock::now();
        times.push_back(std::chrono::duration<double>(stop - start).count());
        checksum = acc;
    }
    // Keep the warmup result observable as well.
    if (sink == 1e300) checksum += 1.0;

    std::nth_element(times.begin(), times.begin() + static_cast<std::ptrdiff_t>(times.size() / 2), times.end());
    return {times[times.size() / 2], std::bit_cast<std::uint64_t>(checksum)};
}

template <Backend B>
Timing run_dynamic(const ModelSpec& spec, const Signal& signal, std::size_t frames, std::size_t warmup, int runs) {
    auto model = Model<Sample, B>::load(spec);
    const std::size_t n = model.in_size();
    return time_loop([&](const Sample* x) { return model.forward(std::span<const Sample>(x, n)); },
                     [&] { model.reset(); }, signal, frames, warmup, runs);
}

template <typename M>
Timing run_static_model(const ModelSpec& spec, const Signal& signal, std::size_t frames, std::size_t warmup,
                        int runs) {
    auto model = std::make_unique<M>();
    model->load(spec);
    return time_loop([&](const Sample* x) { return model->forward(std::span<const Sample, M::in_size>(x, M::in_size)); },
                     [&] { model->reset(); }, signal, frames, warmup, runs);
}

template <Backend B, std::size_t N>
Timing run_static_sized(LayerKind kind, const ModelSpec& spec, const Signal& signal, std::size_t frames,
                        std::size_t warmup, int runs) {
    switch (kind) {
    case LayerKind::dense:
        return run_static_model<ModelT<Sample, N, N, DenseT<Sample, N, N, B>>>(spec, signal, frames, warmup, runs);
    case LayerKind::conv1d:
        return run_static_model<
            ModelT<Sample, N, N, Conv1DT<Sample, N, N, bench_conv_kernel_size, bench_conv_dilation, B>>>(
            spec, signal, frames, warmup, runs);
    case LayerKind::lstm:
        return run_static_model<ModelT<Sample, N, N, LSTMLayerT<Sample, N, N, B>>>(spec, signal, frames, warmup,
                                                                                   runs);
    case LayerKind::gru:
        return run_static_model<ModelT<Sample, N, N, GRULayerT<Sample, N, N, B>>>(spec, signal, frames, warmup,
                                                                                  runs);
    case LayerKind::tanh:
        return run_static_model<ModelT<Sample, N, N, TanhActivationT<Sample, N, B>>>(spec, signal, frames, warmup,
                                                                                     runs);
    case LayerKind::relu:
        return run_static_model<ModelT<Sample, N, N, ReLuActivationT<Sample, N, B>>>(spec, signal, frames, warmup,
                                                                                     runs);
    case LayerKind::sigmoid:
        return run_static_model<ModelT<Sample, N, N, SigmoidActivationT<Sample, N, B>>>(spec, signal, frames,
                                                                                        warmup, runs);
    case LayerKind::softmax:
        return run_static_model<ModelT<Sample, N, N, SoftmaxActivationT<Sample, N, B>>>(spec, signal, frames,
                                                                                        warmup, runs);
    }
    throw ConfigError("unknown layer kind");
}

template <Backend B>
Timing run_static(LayerKind kind, std::size_t size, const ModelSpec& spec, const Signal& signal,
                  std::size_t frames, std::size_t warmup, int runs) {
    switch (size) {
    case 4: return run_static_sized<B, 4>(kind, spec, signal, frames, warmup, runs);
    case 8: return run_static_sized<B, 8>(kind, spec, signal, frames, warmup, runs);
    case 16: return run_static_sized<B, 16>(kind, spec, signal, frames, warmup, runs);
    case 32: return run_static_sized<B, 32>(kind, spec, signal, frames, warmup, runs);
    case 64: return run_static_sized<B, 64>(kind, spec, signal, frames, warmup, runs);
    case 128: return run_static_sized<B, 128>(kind, spec, signal, frames, warmup, runs);
    default:
        throw ConfigError("static API is compiled for sizes 4, 8, 16, 32, 64, 128 only; got " +
                          std::to_string(size));
    }
}

} // namespace

ModelSpec make_bench_spec(LayerKind kind, std::size_t size, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const double scale = 1.0 / std::sqrt(static_cast<double>(size));

    LayerSpec layer;
    layer.kind = kind;
    layer.in_size = size;
    layer.out_size = size;
    if (kind == LayerKind::conv1d) {
        layer.kernel_size = bench_conv_kernel_size;
        layer.dilation = bench_conv_dilation;
    }
    const WeightCounts counts = expected_weight_counts(layer);
    layer.weights.kernel = random_values(rng, counts.kernel, scale);
    layer.weights.recurrent_kernel = random_values(rng, counts.recurrent_kernel, scale);
    layer.weights.bias = random_values(rng, counts.bias, scale);
    layer.weights.bias_recurrent = random_values(rng, counts.bias_recurrent, scale);

    ModelSpec spec;
    spec.in_size = size;
    spec.precision = precision_of<Sample>;
    spec.layers.push_back(std::move(layer));
    return spec;
}

RtReport run_benchmark(const BenchConfig& cfg) {
    if (cfg.size < 1) throw ConfigError("layer size must be >= 1");
    if (!(cfg.signal_seconds > 0.0)) throw ConfigError("signal duration must be > 0");
    if (!(cfg.sample_rate > 0.0)) throw ConfigError("sample rate must be > 0");
    if (cfg.warmup_seconds < 0.0) throw ConfigError("warmup must be >= 0");
    if (cfg.runs < 1) throw ConfigError("runs must be >= 1");

    const auto frames = static_cast<std::size_t>(std::llround(cfg.signal_seconds * cfg.sample_rate));
    const auto warmup = static_cast<std::size_t>(std::llround(cfg.warmup_seconds * cfg.sample_rate));
    if (frames == 0) throw ConfigError("signal is shorter than one sample");

    const ModelSpec spec = make_bench_spec(cfg.layer, cfg.size, cfg.seed);
    const Signal signal = make_signal(cfg.size, frames, cfg.seed);

    Timing timing{};
    if (cfg.api == Api::dynamic) {
        timing = cfg.backend == Backend::scalar
                     ? run_dynamic<Backend::scalar>(spec, signal, frames, warmup, cfg.runs)
                     : run_dynamic<Backend::vectorized>(spec, signal, frames, warmup, cfg.runs);
    } else {
        timing = cfg.backend == Backend::scalar
                     ? run_static<Backend::scalar>(cfg.layer, cfg.size, spec, signal, frames, warmup, cfg.runs)
                     : run_static<Backend::vectorized>(cfg.layer, cfg.size, spec, signal, frames, warmup, cfg.runs);
    }

    RtReport report;
    report.config = cfg;
    report.t_signal = static_cast<double>(frames) / cfg.sample_rate;
    report.t_process = timing.t_process;
    report.v_rt = compute_rt_factor(report.t_signal, report.t_process);
    report.checksum = timing.checksum;
    return report;
}

} // namespace rtnn::bench
