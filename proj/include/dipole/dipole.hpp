#pragma once

#include "dipole/errors.hpp"
#include "dipole/model.hpp"
#include "dipole/specfun.hpp"
#include "dipole/analytic_spectrum.hpp"
#include "dipole/ode.hpp"
#include "dipole/eigensolver.hpp"
