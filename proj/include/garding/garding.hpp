#pragma once

#include "garding/cones.hpp"
#include "garding/conformal.hpp"
#include "garding/eigen_tuple.hpp"
#include "garding/ellipticity.hpp"
#include "garding/errors.hpp"
#include "garding/io.hpp"
#include "garding/operators.hpp"
#include "garding/radial_solver.hpp"
#include "garding/sampling.hpp"
#include "garding/sigma.hpp"
#include "garding/tridiagonal.hpp"
#include "garding/verify.hpp"
