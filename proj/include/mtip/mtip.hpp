#pragma once

#include "mtip/core/errors.hpp"
#include "mtip/core/integrator.hpp"
#include "mtip/core/model.hpp"
#include "mtip/core/rng.hpp"
#include "mtip/experiments/checkpoints.hpp"
#include "mtip/experiments/drops.hpp"
#include "mtip/experiments/hysteresis.hpp"
#include "mtip/experiments/intermittency.hpp"
#include "mtip/experiments/multistability.hpp"
#include "mtip/experiments/ramp.hpp"
#include "mtip/experiments/tongue.hpp"
#include "mtip/experiments/work_pool.hpp"
#include "mtip/observables/amplitude.hpp"
#include "mtip/observables/locking.hpp"
#include "mtip/observables/residence.hpp"
#include "mtip/observables/section.hpp"
