#include <chrono>
#include <iostream>

#include "fourcolor/cartwheel.hpp"
#include "fourcolor/color.hpp"
#include "fourcolor/gen.hpp"
#include "fourcolor/testpaths.hpp"

#ifdef FOURCOLOR_OPENMP
#include <omp.h>
#endif

using namespace fourcolor;

namespace {

double seconds(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

// Compares the OpenMP kernels against their serial reference implementations:
// the per-dart charge ledger and the per-wheel enumeration pruning pass.
int main(int argc, char** argv) {
    int n = argc > 1 ? std::atoi(argv[1]) : 4000;
#ifdef FOURCOLOR_OPENMP
    std::cout << "threads: " << omp_get_max_threads() << "\n";
#else
    std::cout << "threads: 1 (built without OpenMP)\n";
#endif
    RuleSet rules = load_rules_file(test_data_dir() + "/rules/sample.rules");

    std::cout << "charge ledger over " << n << "-vertex triangulations\n";
    for (uint64_t seed = 1; seed <= 3; ++seed) {
        EmbeddedTriangulation g = random_triangulation(n, seed);
        auto t0 = std::chrono::steady_clock::now();
        ChargeLedger serial = charge_ledger_serial(g, rules);
        double ts = seconds(t0);
        t0 = std::chrono::steady_clock::now();
        ChargeLedger parallel = charge_ledger(g, rules);
        double tp = seconds(t0);
        bool same = serial.sent == parallel.sent && serial.final_charge == parallel.final_charge;
        std::printf("  seed %llu: serial %.3fs  parallel %.3fs  speedup %.2fx  equal=%d\n",
                    (unsigned long long)seed, ts, tp, ts / tp, (int)same);
    }

    std::cout << "wheel pruning pass (center degree 7)\n";
    std::vector<ExtendedConfiguration> dbar =
        build_dbar({load_config_file(test_data_dir() + "/configs/birkhoff.conf")});
    std::vector<CombinedRule> combined = combine_rules(rules, dbar);
    CartwheelInputs in{&rules, &combined, &dbar};
    std::vector<PseudoConfiguration> wheels = enum_wheels(7);
    std::vector<char> cut_serial(wheels.size(), 0), cut_parallel(wheels.size(), 0);
    auto t0 = std::chrono::steady_clock::now();
    for (size_t i = 0; i < wheels.size(); ++i) cut_serial[i] = prune_cartwheel(wheels[i], {}, in);
    double ts = seconds(t0);
    t0 = std::chrono::steady_clock::now();
#ifdef FOURCOLOR_OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (size_t i = 0; i < wheels.size(); ++i) cut_parallel[i] = prune_cartwheel(wheels[i], {}, in);
    double tp = seconds(t0);
    std::printf("  %zu wheels: serial %.3fs  parallel %.3fs  speedup %.2fx  equal=%d\n",
                wheels.size(), ts, tp, ts / tp, (int)(cut_serial == cut_parallel));
    return 0;
}
