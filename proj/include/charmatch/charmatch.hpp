#pragma once

#include "charmatch/rational.hpp"
#include "charmatch/polynomial.hpp"
#include "charmatch/specfun.hpp"
#include "charmatch/jet.hpp"
#include "charmatch/expr.hpp"
#include "charmatch/quadrature.hpp"
#include "charmatch/framework.hpp"
#include "charmatch/expansions.hpp"
#include "charmatch/integral_match.hpp"
#include "charmatch/ws_interp.hpp"
#include "charmatch/figures.hpp"
