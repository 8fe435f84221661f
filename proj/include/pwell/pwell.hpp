#pragma once

#include "pwell/error.hpp"
#include "pwell/domain.hpp"
#include "pwell/sine_transform.hpp"
#include "pwell/norms.hpp"
#include "pwell/functionals.hpp"
#include "pwell/fibering.hpp"
#include "pwell/parallel.hpp"
#include "pwell/random_fields.hpp"
#include "pwell/sobolev.hpp"
#include "pwell/well_depth.hpp"
#include "pwell/wells.hpp"
#include "pwell/regime.hpp"
#include "pwell/solver.hpp"
#include "pwell/monitors.hpp"
#include "pwell/config.hpp"
#include "pwell/scenarios.hpp"
#include "pwell/verify.hpp"
#include "pwell/io.hpp"
#include "pwell/commands.hpp"
