#pragma once

// Umbrella header: model-based construction of truth-invariant open
// non-uniform cylindrical algebraic decompositions.

#include "nucad/factor.hpp"
#include "nucad/formula.hpp"
#include "nucad/onecell.hpp"
#include "nucad/oracle.hpp"
#include "nucad/plot.hpp"
#include "nucad/polynomial.hpp"
#include "nucad/projection.hpp"
#include "nucad/rational.hpp"
#include "nucad/realroots.hpp"
#include "nucad/subresultant.hpp"
#include "nucad/tree.hpp"
#include "nucad/tree_io.hpp"
