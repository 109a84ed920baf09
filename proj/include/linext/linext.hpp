#pragma once

// Umbrella header: counting and sequential-importance-sampling estimation of
// the number of linear extensions of a poset.

#include "linext/bitset.hpp"      // IWYU pragma: export
#include "linext/errors.hpp"      // IWYU pragma: export
#include "linext/exact.hpp"       // IWYU pragma: export
#include "linext/experiment.hpp"  // IWYU pragma: export
#include "linext/importance.hpp"  // IWYU pragma: export
#include "linext/logspace.hpp"    // IWYU pragma: export
#include "linext/poset.hpp"       // IWYU pragma: export
#include "linext/poset_io.hpp"    // IWYU pragma: export
#include "linext/rng.hpp"         // IWYU pragma: export
#include "linext/sis.hpp"         // IWYU pragma: export
#include "linext/variance.hpp"    // IWYU pragma: export
