#pragma once

#include <iosfwd>

#include "inav/harness.hpp"

namespace inav {

// Newline-delimited JSON environment service for out-of-process learners.
// Requests: {"op":"reset"} or {"op":"step","action":[wl,wr]}; each reply is
// one line {"observation":...,"reward":...,"done":...,"info":...}.
// Returns the number of episodes served; stops on EOF or {"op":"close"}.
int serve_env_protocol(std::istream& in, std::ostream& out, const BenchmarkConfig& config,
                       const Scene& base_scene, uint64_t first_seed, double k_int);

}  // namespace inav
