#pragma once

#include "qhe/errors.hpp"
#include "qhe/numeric.hpp"
#include "qhe/medium.hpp"
#include "qhe/equilibrium.hpp"
#include "qhe/otto_cycle.hpp"
#include "qhe/quadrature.hpp"
#include "qhe/oracle.hpp"
#include "qhe/verification.hpp"
#include "qhe/sweep.hpp"
