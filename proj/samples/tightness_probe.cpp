// How close do finite spike-and-filler laws get to the cube-plus bound
// E (S - x)_+^3 <= E (Z - x)_+^3 + beta at x = 0? The ratio climbs toward one
// as the spikes split and the fillers refine.

#include <cstdio>

#include "rosenthal3/rosenthal3.hpp"

int main() {
    using namespace rosenthal3;
    const double beta = 0.2, y = 2.0;
    std::printf("%8s %10s %14s %14s %8s\n", "spikes", "fillers", "exact", "bound", "ratio");
    for (std::size_t spikes : {2, 8, 32}) {
        for (std::size_t fillers : {32, 128, 256}) {
            const ExtremalSpec ex = extremal_spec(beta, y, spikes, fillers, 1.0);
            const double exact = exact_expectation_fn(ex.spec, [](double s) {
                const double w = s > 0.0 ? s : 0.0;
                return w * w * w;
            });
            const double bound = cube_plus_bound(0.0, Constraints(ex.effective_beta)).value;
            std::printf("%8zu %10zu %14.9f %14.9f %8.4f\n", spikes, fillers, exact,
                        bound, exact / bound);
        }
    }
    return 0;
}
