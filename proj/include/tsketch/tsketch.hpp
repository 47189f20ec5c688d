#pragma once

// Umbrella header: the whole library in one include.

#include "tsketch/analytics.hpp"      // IWYU pragma: export
#include "tsketch/baselines.hpp"      // IWYU pragma: export
#include "tsketch/config.hpp"         // IWYU pragma: export
#include "tsketch/geometry.hpp"       // IWYU pragma: export
#include "tsketch/hash.hpp"           // IWYU pragma: export
#include "tsketch/layer_array.hpp"    // IWYU pragma: export
#include "tsketch/metrics.hpp"        // IWYU pragma: export
#include "tsketch/serialization.hpp"  // IWYU pragma: export
#include "tsketch/sketch.hpp"         // IWYU pragma: export
#include "tsketch/workloads.hpp"      // IWYU pragma: export
