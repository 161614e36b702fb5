#pragma once

#include "flockfab/baseline.hpp"
#include "flockfab/core.hpp"
#include "flockfab/engine.hpp"
#include "flockfab/experiment.hpp"
#include "flockfab/flocking.hpp"
#include "flockfab/metrics.hpp"
#include "flockfab/policy.hpp"
#include "flockfab/rng.hpp"
#include "flockfab/run_result.hpp"
#include "flockfab/scenario.hpp"
