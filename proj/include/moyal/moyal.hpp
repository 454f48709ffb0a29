#pragma once

#include "moyal/bopp.hpp"
#include "moyal/errors.hpp"
#include "moyal/grid.hpp"
#include "moyal/grid_star.hpp"
#include "moyal/integrate.hpp"
#include "moyal/models/damped.hpp"
#include "moyal/models/helium.hpp"
#include "moyal/models/oscillator.hpp"
#include "moyal/negativity.hpp"
#include "moyal/parallel.hpp"
#include "moyal/poly_gauss.hpp"
#include "moyal/polynomial.hpp"
#include "moyal/quadrature.hpp"
#include "moyal/residual.hpp"
#include "moyal/sampling.hpp"
#include "moyal/special.hpp"
#include "moyal/star.hpp"
#include "moyal/wigner_transform.hpp"
