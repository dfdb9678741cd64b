#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace hc {

// Feasibility-guard violation (CLI exit code 3).
struct guard_error : std::runtime_error {
    explicit guard_error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input / schema violation (CLI exit code 2).
struct parse_error : std::runtime_error {
    explicit parse_error(const std::string& what) : std::runtime_error(what) {}
};

// Internal invariant broken; always a bug.
struct internal_error : std::logic_error {
    explicit internal_error(const std::string& what) : std::logic_error(what) {}
};

// Runtime switch between the OpenMP kernels and the serial reference path.
// Results are identical either way; tests assert that.
bool parallel_enabled();
void set_parallel_enabled(bool on);
int worker_count();

// Chunked parallel map with deterministic ordered merge: out[i] = fn(i).
// Falls back to a plain loop when parallelism is off or the range is tiny.
template <class Fn>
void parallel_index(std::size_t n, Fn&& fn) {
    if (!parallel_enabled() || n < 64) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
#pragma omp parallel for schedule(dynamic, 16)
    for (long long i = 0; i < static_cast<long long>(n); ++i)
        fn(static_cast<std::size_t>(i));
}

inline long long ipow_ll(long long b, int e) {
    long long r = 1;
    while (e-- > 0) r *= b;
    return r;
}

}  // namespace hc
