#pragma once

// Umbrella header for the VLWE library: the coordinate-wise quotient-ring
// algebra, samplers, the vector encryption scheme with its reference
// multiplicative path, the analytic noise model, the attack-cost
// estimator, the RLWE baseline, and the benchmark harness.

#include "vlwe/bench.hpp"
#include "vlwe/errors.hpp"
#include "vlwe/estimator.hpp"
#include "vlwe/modarith.hpp"
#include "vlwe/noise.hpp"
#include "vlwe/ntt.hpp"
#include "vlwe/params.hpp"
#include "vlwe/ref_scheme.hpp"
#include "vlwe/ring.hpp"
#include "vlwe/rlwe.hpp"
#include "vlwe/sampler.hpp"
#include "vlwe/scheme.hpp"
#include "vlwe/serialize.hpp"
