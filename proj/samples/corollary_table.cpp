// Prints the fractional-moment bound E S_+^p <= g(p, a*) (E (Z+a*)_+^3 + beta)
// for a few moment orders, with the shift optimized per (p, beta).

#include <cstdio>

#include "rosenthal3/rosenthal3.hpp"

int main() {
    using namespace rosenthal3;
    std::printf("%6s %8s %12s %14s %14s\n", "p", "beta", "a*", "bound", "coefficient");
    for (double p : {0.5, 1.0, 1.5, 2.0, 2.5}) {
        for (double beta : {0.0, 0.1, 1.0}) {
            const OptimizedCorollary opt = optimize_corollary(p, Constraints(beta));
            std::printf("%6.1f %8.1f %12.6f %14.8f %14.8f\n", p, beta, opt.a_star,
                        opt.bound.value, opt.bound.parameters.at("coefficient"));
        }
    }
    return 0;
}
