#pragma once

// Umbrella header for the moran-dim library.

#include "moran/band.hpp"
#include "moran/classic_dims.hpp"
#include "moran/config.hpp"
#include "moran/constructions.hpp"
#include "moran/cutset_dp.hpp"
#include "moran/errors.hpp"
#include "moran/level_rule.hpp"
#include "moran/moran_spec.hpp"
#include "moran/oracle.hpp"
#include "moran/ratio_vector.hpp"
#include "moran/report.hpp"
#include "moran/root_find.hpp"
#include "moran/run.hpp"
#include "moran/spectrum.hpp"
#include "moran/word.hpp"
