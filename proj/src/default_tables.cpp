#include <cmath>

#include "wbs2/estimation.hpp"

namespace wbs2 {

// Generated with
//   wbs2 calibrate --level 0.9  --reps 1000 --seed 1
//   wbs2 calibrate --level 0.95 --reps 1000 --seed 1
// (M-tilde = 100, known noise scale, bisection tolerance 0.005).
const ConstantTable& default_constant_table(double level) {
    static const ConstantTable k90{
        {{10, 1.39844}, {50, 1.31641}, {100, 1.28125}, {500, 1.21875},
         {1000, 1.19141}, {5000, 1.15625}, {10000, 1.14844}},
        0.9};
    static const ConstantTable k95{
        {{10, 1.51172}, {50, 1.38281}, {100, 1.35938}, {500, 1.26953},
         {1000, 1.22656}, {5000, 1.20703}, {10000, 1.17969}},
        0.95};
    if (std::abs(level - 0.9) < 1e-9) return k90;
    if (std::abs(level - 0.95) < 1e-9) return k95;
    throw PreconditionError("no shipped constant table for level " + std::to_string(level) +
                            "; use 0.9 or 0.95");
}

}  // namespace wbs2
