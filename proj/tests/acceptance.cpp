// Acceptance runner: one PASS/FAIL line per acceptance criterion.

#include "properties.hpp"

#include <rtnn/bench/bench.hpp>
#include <rtnn/error.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

using namespace rtnn;
using rtnn::testing::Outcome;

namespace {

using clock_type = std::chrono::steady_clock;

struct Criterion {
    const char* name;
    double time_limit_seconds; // 0 = none
    std::function<Outcome()> run;
};

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
    auto ranks = [](const std::vector<double>& v) {
        std::vector<std::size_t> idx(v.size());
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
        std::vector<double> r(v.size());
        for (std::size_t i = 0; i < idx.size(); ++i) r[idx[i]] = static_cast<double>(i);
        return r;
    };
    const auto rx = ranks(x), ry = ranks(y);
    const double n = static_cast<double>(x.size());
    double d2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) d2 += (rx[i] - ry[i]) * (rx[i] - ry[i]);
    return 1.0 - 6.0 * d2 / (n * (n * n - 1.0));
}

bench::RtReport measure(std::size_t size, bench::Api api, double seconds) {
    bench::BenchConfig cfg;
    cfg.layer = LayerKind::dense;
    cfg.size = size;
    cfg.api = api;
    cfg.signal_seconds = seconds;
    cfg.runs = 3;
    cfg.seed = 1;
    return bench::run_benchmark(cfg);
}

Outcome benchmark_semantics() {
    Outcome out;
    std::ostringstream detail;

    struct Crafted {
        double signal, process, expected;
    };
    for (const Crafted& c : {Crafted{2.0, 1.0, 2.0}, Crafted{1.0, 1.0, 1.0}, Crafted{1.0, 4.0, 0.25}}) {
        ++out.checks;
        if (bench::compute_rt_factor(c.signal, c.process) != c.expected)
            out.fail("compute_rt_factor(" + std::to_string(c.signal) + ", " + std::to_string(c.process) + ")");
    }
    for (double bad : {0.0, -1.0}) {
        ++out.checks;
        try {
            bench::compute_rt_factor(1.0, bad);
            out.fail("t_process " + std::to_string(bad) + " accepted");
        } catch (const InvalidMeasurement&) {
        }
    }

    const auto dense16 = measure(16, bench::Api::dynamic, 5.0);
    ++out.checks;
    if (!(dense16.v_rt > 1.0)) out.fail("dense 16 v_rt " + std::to_string(dense16.v_rt) + " <= 1");
    if (dense16.v_rt != dense16.t_signal / dense16.t_process) out.fail("v_rt != t_signal / t_process");
    detail << "dense16 v_rt=" << dense16.v_rt;

    for (std::size_t n : {8, 16, 32}) {
        const double dyn = measure(n, bench::Api::dynamic, 2.0).v_rt;
        const double st = measure(n, bench::Api::static_, 2.0).v_rt;
        ++out.checks;
        detail << "; N=" << n << " static/dynamic=" << st / dyn;
        if (!(st >= dyn))
            out.fail("dense " + std::to_string(n) + ": static v_rt " + std::to_string(st) + " < dynamic " +
                     std::to_string(dyn));
    }

    for (bench::Api api : {bench::Api::dynamic, bench::Api::static_}) {
        std::vector<double> sizes, rates;
        for (std::size_t n : bench::size_grid) {
            sizes.push_back(static_cast<double>(n));
            rates.push_back(measure(n, api, 1.0).v_rt);
        }
        const double rho = spearman(sizes, rates);
        ++out.checks;
        detail << "; spearman(" << to_string(api) << ")=" << rho;
        if (!(rho < 0.0)) out.fail("v_rt does not decrease with size for the " + std::string(to_string(api)) + " API");
    }

    if (out.ok) out.detail = detail.str();
    return out;
}

Outcome property_suites() {
    Outcome out;
    out.merge(rtnn::testing::check_softmax_properties(1000, 31));
    out.merge(rtnn::testing::check_gru_convex(200, 32));
    out.merge(rtnn::testing::check_conv_ring_buffer(200, 33));
    out.merge(rtnn::testing::check_reset_determinism(34));
    return out;
}

} // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {"real-time safety: 0 allocations over 1e5 forwards per layer kind and API", 60.0,
         [] { return rtnn::testing::check_realtime_safety(100000); }},
        {"oracle equivalence: 1e3 random cases per layer within 1e-6 relative (f64)", 60.0,
         [] { return rtnn::testing::check_oracle_equivalence(1000, 2024); }},
        {"dynamic == static within 2 ULP: 1e3 frames per kind and 3-layer compositions", 0.0,
         [] { return rtnn::testing::check_dynamic_static(1000, 2025); }},
        {"benchmark: rt factor exact, dense 16 real-time, static >= dynamic for 8-32, cost grows with size", 0.0,
         benchmark_semantics},
        {"property suites: softmax, gru convexity, conv1d ring buffer, reset determinism", 0.0, property_suites},
        {"format robustness: every cardinality mutation rejected with a named ValidationError", 0.0,
         [] { return rtnn::testing::check_mutation_rejection(2026); }},
    };

    int failures = 0;
    for (const Criterion& c : criteria) {
        const auto start = clock_type::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.fail(std::string("exception: ") + e.what());
        }
        const double seconds = std::chrono::duration<double>(clock_type::now() - start).count();
        if (c.time_limit_seconds > 0.0 && seconds > c.time_limit_seconds)
            o.fail("took " + std::to_string(seconds) + " s, limit " + std::to_string(c.time_limit_seconds) + " s");
        std::printf("%s  %s  [%zu checks, %.2f s]%s%s\n", o.ok ? "PASS" : "FAIL", c.name, o.checks, seconds,
                    o.detail.empty() ? "" : "  ", o.detail.c_str());
        std::fflush(stdout);
        if (!o.ok) ++failures;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
