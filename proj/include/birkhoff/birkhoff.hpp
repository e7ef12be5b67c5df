#pragma once

// Umbrella header: pressure spectra of Birkhoff level sets on mixing
// shifts of finite type, suspension-flow entropy spectra, and Hausdorff
// dimension of level sets for full-branch piecewise linear interval maps.

#include "birkhoff/config.hpp"
#include "birkhoff/dimension.hpp"
#include "birkhoff/errors.hpp"
#include "birkhoff/estimators.hpp"
#include "birkhoff/flows.hpp"
#include "birkhoff/io.hpp"
#include "birkhoff/mean_cycle.hpp"
#include "birkhoff/pressure.hpp"
#include "birkhoff/spectrum.hpp"
#include "birkhoff/sft.hpp"
