#pragma once

#include <rtnn/format/model_spec.hpp>
#include <rtnn/kernel/backend.hpp>
#include <rtnn/layers/layer_kind.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rtnn::bench {

enum class Api { dynamic, static_ };

constexpr std::string_view to_string(Api api) noexcept { return api == Api::dynamic ? "dynamic" : "static"; }

/// Layer sizes swept when no size is given. Also the sizes compiled in for
/// the static API.
inline constexpr std::size_t size_grid[] = {4, 8, 16, 32, 64, 128};

/// Conv1D geometry used by the benchmark.
inline constexpr std::size_t bench_conv_kernel_size = 3;
inline constexpr std::size_t bench_conv_dilation = 1;

struct BenchConfig {
    LayerKind layer = LayerKind::dense;
    std::size_t size = 16; // input = output channels
    Api api = Api::dynamic;
    Backend backend = default_backend;
    double sample_rate = 48000.0;
    double signal_seconds = 1.0;
    std::uint64_t seed = 0;
    double warmup_seconds = 0.5;
    int runs = 5; // median of this many timed passes
};

struct RtReport {
    double t_signal = 0.0;  // seconds of audio processed
    double t_process = 0.0; // median wall time of the timed loop
    double v_rt = 0.0;      // t_signal / t_process
    std::uint64_t checksum = 0;
    BenchConfig config;
};

/// v_RT = t_signal / t_process. Values below 1 cannot keep up in real time.
/// Throws InvalidMeasurement if t_process <= 0.
double compute_rt_factor(double t_signal, double t_process);

/// Single layer of `cfg.size` channels with seeded random weights, fed a
/// seeded uniform [-1, 1] signal. Only the forward loop is timed.
/// Throws ConfigError for invalid or unsupported configurations.
RtReport run_benchmark(const BenchConfig& cfg);

/// Random single-layer model description used by the benchmark.
ModelSpec make_bench_spec(LayerKind kind, std::size_t size, std::uint64_t seed);

std::string csv_header();
std::string to_csv_row(const RtReport& report);

struct IoFixture {
    std::vector<std::vector<double>> input;
    std::vector<std::vector<double>> expected_output;
    double tolerance = 1e-5;
};

/// Throws ParseError / ConfigError for malformed fixtures.
IoFixture parse_fixture_json(std::string_view text);
IoFixture load_fixture_file(const std::filesystem::path& path);
std::string serialize_fixture_json(const IoFixture& fixture);

struct VerifyReport {
    bool passed = true;
    std::size_t frames = 0;
    double tolerance = 0.0;
    double max_abs_error = 0.0;
    /// |y - e| / max(|e|, 1), maximised over all elements.
    double max_rel_error = 0.0;
    std::optional<std::size_t> first_failing_frame;
    std::optional<std::size_t> first_failing_channel;
};

/// Loads the model through `api`, resets it, streams the fixture inputs and
/// compares every output element: an element passes when
/// |y - e| <= tolerance * max(|e|, 1).
///
/// The static API only knows the compositions in static_catalog(); other
/// models raise ArchitectureMismatch.
VerifyReport verify(const ModelSpec& spec, const IoFixture& fixture, Api api,
                    std::optional<double> tolerance_override = std::nullopt);

/// Names of the compositions compiled into the static verify path.
std::vector<std::string> static_catalog();

} // namespace rtnn::bench
