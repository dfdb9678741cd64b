// Benchmark: serial reference vs OpenMP kernels on the enumeration hot
// paths (submodule censuses, torsion censuses, place sieves).  Results must
// match exactly; timings are printed for comparison.

#include <chrono>
#include <iostream>

#include "hallcurve/cohp1.hpp"
#include "hallcurve/finmod.hpp"
#include "hallcurve/util.hpp"

using namespace hc;
using Clock = std::chrono::steady_clock;

namespace {

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

template <class Fn>
double timed(Fn&& fn) {
    auto t0 = Clock::now();
    fn();
    return ms_since(t0);
}

void report(const std::string& name, double serial_ms, double parallel_ms, bool equal) {
    std::printf("%-40s serial %8.1f ms   parallel %8.1f ms   speedup %5.2fx   %s\n", name.c_str(),
                serial_ms, parallel_ms, serial_ms / std::max(parallel_ms, 0.01),
                equal ? "results equal" : "RESULTS DIFFER");
}

}  // namespace

int main() {
    std::printf("threads available: %d\n", worker_count());

    // submodule census (cache-defeating: distinct partitions per run)
    {
        std::vector<Partition> jobs = {{1, 1, 1, 1}, {2, 1, 1}, {2, 2}, {3, 1}, {4}};
        CensusTable serial_out, parallel_out;
        set_parallel_enabled(false);
        double t_ser = timed([&] {
            for (const auto& p : jobs) {
                FinModule M(p, 3);
                auto subs = enumerate_submodules(M);
                for (const auto& N : subs)
                    serial_out[{classify_submodule(M, N), classify_quotient(M, N)}] += 1;
            }
        });
        set_parallel_enabled(true);
        double t_par = timed([&] {
            for (const auto& p : jobs) {
                FinModule M(p, 3);
                auto subs = enumerate_submodules(M);
                std::vector<std::pair<Partition, Partition>> cls(subs.size());
                parallel_index(subs.size(), [&](size_t i) {
                    cls[i] = {classify_submodule(M, subs[i]), classify_quotient(M, subs[i])};
                });
                for (auto& kv : cls) parallel_out[kv] += 1;
            }
        });
        report("submodule census, weight 4 at q=3", t_ser, t_par, serial_out == parallel_out);
    }

    // place sieve
    {
        std::vector<PlaceP1> a, b;
        set_parallel_enabled(false);
        double t_ser = timed([&] { a = places(3, 9); });
        set_parallel_enabled(true);
        double t_par = timed([&] { b = places(3, 9); });
        report("place sieve, q=3 through degree 9", t_ser, t_par, a == b);
    }

    // torsion census with |Aut| weights
    {
        set_parallel_enabled(false);
        std::vector<std::pair<TorsionP1, Int>> a, b;
        double t_ser = timed([&] { a = torsion_census_global(2, 6); });
        set_parallel_enabled(true);
        double t_par = timed([&] { b = torsion_census_global(2, 6); });
        report("global torsion census, q=2 degree 6", t_ser, t_par, a == b);
    }
    return 0;
}
