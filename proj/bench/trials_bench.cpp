// Compares the OpenMP trial runner against the serial reference runner on the
// same workload and checks that the aggregates are bit-identical (per-trial
// derived seeds + associative merge make scheduling irrelevant).

#include "skotch/adversary.hpp"
#include "skotch/catalog.hpp"

#include <chrono>
#include <cstdlib>
#include <iostream>

int main(int argc, char** argv) {
    using namespace skotch;
    uint64_t trials = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 20000;
    uint64_t seed = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 7;

    SchemePtr scheme = scheme_from_spec("pp-matching:eps=1/4");
    Graph g = graph_from_spec("matching:m=2000");
    AdversaryPtr adv = adversary_from_spec("random-pair");

    auto timed = [&](bool parallel) {
        auto t0 = std::chrono::steady_clock::now();
        ForgeryEstimate e = estimate_forgery(*scheme, g, *adv, trials, seed, parallel);
        auto t1 = std::chrono::steady_clock::now();
        double sec = std::chrono::duration<double>(t1 - t0).count();
        std::cout << (parallel ? "parallel" : "serial  ") << "  trials " << trials
                  << "  wins " << e.wins << "  rate " << e.rate << "  time " << sec
                  << " s\n";
        return e;
    };

    ForgeryEstimate par = timed(true);
    ForgeryEstimate ser = timed(false);
    if (par.wins != ser.wins || par.rate != ser.rate ||
        par.mean_queries != ser.mean_queries) {
        std::cerr << "MISMATCH between parallel and serial runners\n";
        return 1;
    }
    std::cout << "parallel/serial aggregates identical\n";
    return 0;
}
