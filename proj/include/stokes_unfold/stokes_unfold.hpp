#pragma once

#include "borel_laplace.hpp"
#include "complex_core.hpp"
#include "confluence.hpp"
#include "errors.hpp"
#include "formal_series.hpp"
#include "initial_equation.hpp"
#include "ode_oracle.hpp"
#include "perturbed_equation.hpp"
#include "quadrature.hpp"
#include "spectral.hpp"
