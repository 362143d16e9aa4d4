// rtnn: real-time factor benchmark and fixture verification.
//
//   rtnn bench --layer dense --size 16 --api static --backend vectorized
//   rtnn verify --model model.json --fixture fixture.json --api dynamic
//
// Exit codes: 0 pass, 1 verification failure, 2 configuration error.

#include <rtnn/bench/bench.hpp>
#include <rtnn/error.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

constexpr int exit_pass = 0;
constexpr int exit_fail = 1;
constexpr int exit_config = 2;

rtnn::bench::Api parse_api(const std::string& name) {
    return name == "static" ? rtnn::bench::Api::static_ : rtnn::bench::Api::dynamic;
}

int run_bench(const rtnn::bench::BenchConfig& base, std::vector<std::size_t> sizes, const std::string& csv_path) {
    if (sizes.empty()) sizes.assign(std::begin(rtnn::bench::size_grid), std::end(rtnn::bench::size_grid));

    std::ofstream file;
    if (!csv_path.empty()) {
        file.open(csv_path);
        if (!file) {
            std::cerr << "error: cannot write " << csv_path << "\n";
            return exit_config;
        }
    }
    std::ostream& out = csv_path.empty() ? std::cout : file;
    out << rtnn::bench::csv_header() << "\n";
    for (std::size_t size : sizes) {
        auto cfg = base;
        cfg.size = size;
        const auto report = rtnn::bench::run_benchmark(cfg);
        out << rtnn::bench::to_csv_row(report) << "\n";
        out.flush();
        if (!csv_path.empty())
            std::cerr << rtnn::to_string(cfg.layer) << " size " << size << ": v_rt = " << report.v_rt << "\n";
    }
    return exit_pass;
}

int run_verify(const std::string& model_path, const std::string& fixture_path, rtnn::bench::Api api,
               std::optional<double> tolerance) {
    const auto spec = rtnn::load_model_file(model_path);
    const auto fixture = rtnn::bench::load_fixture_file(fixture_path);
    const auto report = rtnn::bench::verify(spec, fixture, api, tolerance);

    std::cout << "api: " << rtnn::bench::to_string(api) << "\n"
              << "frames: " << report.frames << "\n"
              << "tolerance: " << report.tolerance << "\n"
              << "max_abs_error: " << report.max_abs_error << "\n"
              << "max_rel_error: " << report.max_rel_error << "\n";
    if (report.passed) {
        std::cout << "result: PASS\n";
        return exit_pass;
    }
    std::cout << "result: FAIL at frame " << *report.first_failing_frame << ", channel "
              << *report.first_failing_channel << "\n";
    return exit_fail;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Streaming neural inference: real-time factor benchmark and fixture verification"};
    app.require_subcommand(1);

    const std::vector<std::string> kinds = {"dense", "conv1d", "lstm", "gru", "tanh", "relu", "sigmoid", "softmax"};
    const std::vector<std::string> apis = {"dynamic", "static"};
    const std::vector<std::string> backends = {"scalar", "vectorized"};

    rtnn::bench::BenchConfig cfg;
    std::vector<std::size_t> sizes;
    std::string csv_path;
    std::string layer_name = "dense";
    std::string api_name = "dynamic";
    std::string backend_name{rtnn::to_string(rtnn::default_backend)};
    auto* bench = app.add_subcommand("bench", "Measure the real-time factor of a single layer");
    bench->add_option("--layer", layer_name, "Layer kind")->check(CLI::IsMember(kinds))->capture_default_str();
    bench->add_option("--size", sizes, "Layer size(s); default sweeps 4 8 16 32 64 128")
        ->check(CLI::PositiveNumber);
    bench->add_option("--api", api_name, "dynamic or static")->check(CLI::IsMember(apis))->capture_default_str();
    bench->add_option("--backend", backend_name, "scalar or vectorized")
        ->check(CLI::IsMember(backends))
        ->capture_default_str();
    bench->add_option("--seconds", cfg.signal_seconds, "Signal duration in seconds")->capture_default_str();
    bench->add_option("--sample-rate", cfg.sample_rate, "Sample rate in Hz")->capture_default_str();
    bench->add_option("--seed", cfg.seed, "PRNG seed")->capture_default_str();
    bench->add_option("--warmup", cfg.warmup_seconds, "Untimed warmup in seconds")->capture_default_str();
    bench->add_option("--runs", cfg.runs, "Timed runs; the median is reported")->capture_default_str();
    bench->add_option("--csv", csv_path, "Write CSV here instead of stdout");

    std::string model_path;
    std::string fixture_path;
    std::string verify_api_name = "dynamic";
    std::optional<double> tolerance;
    auto* verify = app.add_subcommand("verify", "Check a model against an input/expected-output fixture");
    verify->add_option("--model", model_path, "Model JSON")->required()->check(CLI::ExistingFile);
    verify->add_option("--fixture", fixture_path, "Fixture JSON")->required()->check(CLI::ExistingFile);
    verify->add_option("--api", verify_api_name, "dynamic or static")->check(CLI::IsMember(apis))->capture_default_str();
    verify->add_option("--tolerance", tolerance, "Override the fixture tolerance");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_config;
    }

    try {
        if (bench->parsed()) {
            cfg.layer = *rtnn::layer_kind_from_string(layer_name);
            cfg.api = parse_api(api_name);
            cfg.backend = backend_name == "scalar" ? rtnn::Backend::scalar : rtnn::Backend::vectorized;
            return run_bench(cfg, sizes, csv_path);
        }
        return run_verify(model_path, fixture_path, parse_api(verify_api_name), tolerance);
    } catch (const rtnn::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_config;
    }
}
