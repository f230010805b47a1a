#pragma once

// Umbrella header for the whole library.

#include "rational.hpp"    // IWYU pragma: export
#include "model.hpp"       // IWYU pragma: export
#include "dispatcher.hpp"  // IWYU pragma: export
#include "engine.hpp"      // IWYU pragma: export
#include "metrics.hpp"     // IWYU pragma: export
#include "dual.hpp"        // IWYU pragma: export
#include "oracle.hpp"      // IWYU pragma: export
#include "generator.hpp"   // IWYU pragma: export
#include "io.hpp"          // IWYU pragma: export
#include "report.hpp"      // IWYU pragma: export
