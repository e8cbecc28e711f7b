#pragma once

#include <stdexcept>
#include <string>

namespace hcsf {

// Two spacecraft closer than the minimum separation: the inverse-cube
// Coulomb terms are meaningless there, so evaluation fails loudly instead
// of producing enormous accelerations.
class SingularityError : public std::runtime_error {
public:
    SingularityError(std::size_t craft_a, std::size_t craft_b, double distance, double time)
        : std::runtime_error("spacecraft " + std::to_string(craft_a + 1) + " and " +
                             std::to_string(craft_b + 1) + " separated by " +
                             std::to_string(distance) + " m" +
                             (time >= 0.0 ? " at t = " + std::to_string(time) + " s" :
                                            std::string{})),
          craft_a(craft_a), craft_b(craft_b), distance(distance), time(time) {}

    std::size_t craft_a;
    std::size_t craft_b;
    double distance;
    double time;  // simulation time, or -1 when outside a simulation
};

// Thrust is required but the thrust direction is degenerate. For a verified
// CLF this state is unreachable, so it signals a corrupted P or state.
class ClfViolationError : public std::runtime_error {
public:
    explicit ClfViolationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hcsf
