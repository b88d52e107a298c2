// Prints one PASS/FAIL line per end-to-end criterion. Each line carries the
// observed metric, the bound it was held to, and the wall time against the
// criterion's time budget.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "cavnet/verification.hpp"

namespace {

// Wall-time budget in seconds. "Instantaneous" criteria get 0.1 s.
double budget(int criterion) {
    switch (criterion) {
    case 7: return 30.0;
    case 8:
    case 9: return 60.0;
    case 1:
    case 2:
    case 4: return 0.1;
    default: return 1.0;
    }
}

bool run_one(int criterion, const cavnet::SuiteOptions& opts) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<cavnet::Check> checks = cavnet::run_acceptance_criterion(criterion, opts);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    bool ok = !checks.empty();
    for (const auto& c : checks) ok = ok && c.passed;
    const bool in_time = seconds <= budget(criterion);

    std::printf("%s criterion %d  (%.3f s, budget %.1f s%s)\n", ok && in_time ? "PASS" : "FAIL",
                criterion, seconds, budget(criterion), in_time ? "" : ", over budget");
    for (const auto& c : checks) {
        std::printf("     %-4s %-6s metric %.6g  bound %.6g  %s\n", c.passed ? "ok" : "FAIL",
                    c.id.c_str(), c.metric, c.threshold, c.detail.c_str());
    }
    std::fflush(stdout);
    return ok && in_time;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cavnet acceptance criteria"};
    int criterion = 0;
    cavnet::SuiteOptions opts;
    app.add_option("--criterion", criterion, "run a single criterion (1-10)")
        ->check(CLI::Range(1, 10));
    app.add_option("--seed", opts.seed, "random seed");
    app.add_option("-j,--threads", opts.threads, "worker threads");
    CLI11_PARSE(app, argc, argv);

    bool all = true;
    if (criterion) {
        all = run_one(criterion, opts);
    } else {
        for (int n = 1; n <= 10; ++n) all = run_one(n, opts) && all;
    }
    return all ? 0 : 1;
}
