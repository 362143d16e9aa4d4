#pragma once

// Randomized property checks shared by the unit tests and the acceptance
// runner. Each returns an Outcome holding the first failure found.

#include <cstddef>
#include <cstdint>
#include <string>

namespace rtnn::testing {

struct Outcome {
    bool ok = true;
    std::string detail;
    std::size_t checks = 0;

    void fail(const std::string& what) {
        if (ok) detail = what;
        ok = false;
    }
    void merge(const Outcome& other) {
        checks += other.checks;
        if (!other.ok) fail(other.detail);
    }
};

/// Zero heap allocations across `calls` forwards per layer kind and API,
/// measured after load and reset.
Outcome check_realtime_safety(std::size_t calls);

/// Every layer kind against the brute-force references, `cases` random
/// layers per kind (f64, both backends), relative tolerance 1e-6.
Outcome check_oracle_equivalence(std::size_t cases, std::uint64_t seed);

/// Dynamic and static models agree within 2 ULP over `frames` random frames
/// for every kind and for three 3-layer compositions.
Outcome check_dynamic_static(std::size_t frames, std::uint64_t seed);

/// Softmax sums to 1 within 1e-6 and is shift invariant within 1e-6.
Outcome check_softmax_properties(std::size_t trials, std::uint64_t seed);

/// GRU output lies between the previous state and the candidate.
Outcome check_gru_convex(std::size_t trials, std::uint64_t seed);

/// Ring-buffer conv equals full-history convolution over 256-frame streams
/// with K <= 8 and d <= 4.
Outcome check_conv_ring_buffer(std::size_t trials, std::uint64_t seed);

/// reset() followed by the same stream reproduces the outputs bit for bit,
/// and matches a freshly loaded model, for every kind and API.
Outcome check_reset_determinism(std::uint64_t seed);

/// Every single-field cardinality mutation of a set of valid documents is
/// rejected with a ValidationError naming the mutated layer and field.
Outcome check_mutation_rejection(std::uint64_t seed);

} // namespace rtnn::testing
