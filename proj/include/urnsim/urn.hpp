// Two-color randomly reinforced urn with barrier-gated reinforcement.
//
// State tracks the black-ball weight and the total weight; the proportion z
// is always recomputed as black/total, never updated incrementally, so that
// the step-increment decomposition can be verified to tight tolerance.
// Reinforcement is suppressed by strict comparisons against the barriers:
// a black draw reinforces only while z < upper, a red draw only while
// z > lower. Equality blocks.

#ifndef URNSIM_URN_HPP
#define URNSIM_URN_HPP

#include <cstdint>
#include <vector>

#include "urnsim/errors.hpp"

namespace urnsim {

struct Barriers {
    double lower = 0.0;  // in [0,1)
    double upper = 1.0;  // in (0,1], strictly above lower
};

inline void validate(const Barriers& b) {
    if (!(b.lower >= 0.0 && b.lower < 1.0))
        throw ValidationError("barriers", "lower must lie in [0,1)");
    if (!(b.upper > 0.0 && b.upper <= 1.0))
        throw ValidationError("barriers", "upper must lie in (0,1]");
    if (!(b.lower < b.upper))
        throw ValidationError("barriers", "lower must be < upper");
}

struct UrnState {
    double black = 0.0;        // black-ball weight
    double total = 0.0;        // total weight S_n
    double z = 0.0;            // black/total
    std::int64_t step_index = 0;
    Barriers barriers{};
};

// One draw: the drawn color and the reinforcement weights for either branch.
// In the main model the red-side weight equals the black-side weight
// (R_n = B_n); they differ only in the mean-matched/drift exploration.
struct StepDraw {
    int x = 0;                 // 1 = black drawn
    double b_reinforce = 0.0;  // added on the black side when x = 1
    double r_reinforce = 0.0;  // added on the red side when x = 0
};

inline UrnState init_state(double b, double r, const Barriers& barriers) {
    if (!(b > 0.0)) throw ValidationError("b", "initial black weight must be > 0");
    if (!(r > 0.0)) throw ValidationError("r", "initial red weight must be > 0");
    validate(barriers);
    UrnState s;
    s.black = b;
    s.total = b + r;
    s.z = b / (b + r);
    s.step_index = 0;
    s.barriers = barriers;
    return s;
}

// Advance one step. Strict indicator semantics: z == upper blocks black
// reinforcement, z == lower blocks red reinforcement.
inline UrnState step(UrnState s, const StepDraw& d) {
    if (d.x == 1) {
        if (s.z < s.barriers.upper) {
            s.black += d.b_reinforce;
            s.total += d.b_reinforce;
        }
    } else {
        if (s.z > s.barriers.lower) {
            s.total += d.r_reinforce;
        }
    }
    s.z = s.black / s.total;
    ++s.step_index;
    return s;
}

// Full trajectory of one simulated path. draws has N entries; z_series and
// s_series have N+1 (index n holds the state after n steps). Replaying the
// draws from (initial_black, initial_red, barriers) through step() must
// reproduce both series bit for bit.
struct PathRecord {
    std::uint64_t config_hash = 0;
    std::uint64_t seed = 0;
    double initial_black = 0.0;
    double initial_red = 0.0;
    Barriers barriers{};
    std::vector<StepDraw> draws;
    std::vector<double> z_series;
    std::vector<double> s_series;

    std::int64_t horizon() const { return static_cast<std::int64_t>(draws.size()); }
};

// Bit-for-bit replay check of a record's series against its draws.
bool replay_matches(const PathRecord& record);

}  // namespace urnsim

#endif  // URNSIM_URN_HPP
