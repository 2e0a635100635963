#pragma once

// Umbrella header.

#include "qnnlab/bounds.hpp"
#include "qnnlab/circuit.hpp"
#include "qnnlab/errors.hpp"
#include "qnnlab/experiments.hpp"
#include "qnnlab/finance.hpp"
#include "qnnlab/hardware.hpp"
#include "qnnlab/noise.hpp"
#include "qnnlab/numerics.hpp"
#include "qnnlab/optim.hpp"
#include "qnnlab/rng.hpp"
#include "qnnlab/sampler.hpp"
#include "qnnlab/train.hpp"
#include "qnnlab/ucr.hpp"
