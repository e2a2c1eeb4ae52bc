// SPDX-License-Identifier: MIT
#pragma once

// Umbrella header for the core library: spectral grid and fields, mild-
// formulation solvers, convolution kernels, and trajectory diagnostics.
// The experiment runner (bouss/experiment.hpp) is not included here because
// it additionally requires the vendored JSON header on the include path.

#include "bouss/rational.hpp"
#include "bouss/special.hpp"
#include "bouss/quadrature.hpp"
#include "bouss/kernels.hpp"
#include "bouss/grid.hpp"
#include "bouss/field.hpp"
#include "bouss/operators.hpp"
#include "bouss/initial_data.hpp"
#include "bouss/weights.hpp"
#include "bouss/state.hpp"
#include "bouss/duhamel.hpp"
#include "bouss/picard.hpp"
#include "bouss/timestepper.hpp"
#include "bouss/scaling.hpp"
#include "bouss/norms.hpp"
#include "bouss/decay.hpp"
#include "bouss/profiles.hpp"
#include "bouss/interpolation.hpp"
#include "bouss/io.hpp"
