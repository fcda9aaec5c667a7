#pragma once

#include "softfix/axioms.hpp"
#include "softfix/balls.hpp"
#include "softfix/continuity.hpp"
#include "softfix/fixed_point.hpp"
#include "softfix/mapping.hpp"
#include "softfix/metric.hpp"
#include "softfix/param_set.hpp"
#include "softfix/point.hpp"
#include "softfix/replay.hpp"
#include "softfix/rng.hpp"
#include "softfix/soft_real.hpp"
#include "softfix/soft_set.hpp"
#include "softfix/topology.hpp"
