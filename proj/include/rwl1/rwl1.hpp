#pragma once

// Umbrella header: sparse recovery via weighted and iteratively reweighted
// l1 minimization, the closed-form error-bound machinery, and the
// Monte-Carlo benchmarking harness.

#include "rwl1/core.hpp"
#include "rwl1/csv.hpp"
#include "rwl1/experiments.hpp"
#include "rwl1/random.hpp"
#include "rwl1/reweight.hpp"
#include "rwl1/solver.hpp"
#include "rwl1/theory.hpp"
#include "rwl1/types.hpp"
