#pragma once

#include "bottleneck.hpp"
#include "compare.hpp"
#include "complexes.hpp"
#include "distance_matrix.hpp"
#include "dms.hpp"
#include "error.hpp"
#include "extended.hpp"
#include "f2.hpp"
#include "grid_function.hpp"
#include "interleaving.hpp"
#include "interval_min.hpp"
#include "invariants.hpp"
#include "oracles.hpp"
#include "parallel.hpp"
#include "persistence_diagram.hpp"
#include "rank_grid.hpp"
#include "scale_axis.hpp"
#include "svg.hpp"
#include "union_find.hpp"
