// Benchmarks the parallel lambda-grid tradeoff evaluation against a serial
// reference and checks that both produce identical results.
#include <chrono>
#include <cstdlib>
#include <iostream>
#include <vector>

#include "matchkit/adversary.hpp"
#include "matchkit/baselines.hpp"
#include "matchkit/core.hpp"
#include "matchkit/lab.hpp"

using namespace matchkit;
using Clock = std::chrono::steady_clock;

int main(int argc, char** argv) {
    int n = argc > 1 ? std::atoi(argv[1]) : 200;
    int grid_size = argc > 2 ? std::atoi(argv[2]) : 8;
    std::vector<double> grid;
    for (int i = 0; i < grid_size; ++i)
        grid.push_back(grid_size == 1 ? 0.0
                                      : static_cast<double>(i) / (grid_size - 1));
    auto factory = [&](double lam) -> std::unique_ptr<OnlinePolicy> {
        return std::make_unique<LabPolicy>(std::vector<double>(2 * n, 1.0), lam);
    };

    // Serial reference.
    auto t0 = Clock::now();
    std::vector<TradeoffPoint> serial;
    for (double lam : grid) {
        auto pr = factory(lam);
        auto pc = factory(lam);
        serial.push_back({lam, run_adversary_R(*pr, n).ratio,
                          run_adversary_C(*pc, n).ratio});
    }
    auto t1 = Clock::now();
    std::vector<TradeoffPoint> parallel = empirical_tradeoff(factory, n, grid);
    auto t2 = Clock::now();

    for (size_t i = 0; i < grid.size(); ++i) {
        if (serial[i].r_hat != parallel[i].r_hat ||
            serial[i].c_hat != parallel[i].c_hat) {
            std::cerr << "mismatch at lambda=" << grid[i] << "\n";
            return 1;
        }
    }
    auto ms = [](auto a, auto b) {
        return std::chrono::duration<double, std::milli>(b - a).count();
    };
    std::cout << "n=" << n << " grid=" << grid_size
              << " serial_ms=" << ms(t0, t1)
              << " parallel_ms=" << ms(t1, t2)
              << " speedup=" << ms(t0, t1) / ms(t1, t2) << "\n";
    return 0;
}
