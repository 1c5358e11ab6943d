#pragma once

#include "hsu/asymptotic.hpp"
#include "hsu/coefficient_io.hpp"
#include "hsu/errors.hpp"
#include "hsu/numeric.hpp"
#include "hsu/poisson_directional.hpp"
#include "hsu/quadrature.hpp"
#include "hsu/special_functions.hpp"
#include "hsu/sphere_core.hpp"
#include "hsu/uncertainty.hpp"
#include "hsu/verify.hpp"
