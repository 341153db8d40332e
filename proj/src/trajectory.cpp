#include "threebody/trajectory.hpp"

namespace threebody {

const char* trajectory_kind_name(TrajectoryKind kind) {
    return kind == TrajectoryKind::body_states ? "body_states" : "surrogate_separation";
}

}  // namespace threebody
