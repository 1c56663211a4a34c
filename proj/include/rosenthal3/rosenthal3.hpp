#pragma once

// Umbrella header: certified third-moment bounds for sums of independent
// random variables under E X_i <= 0, sum E X_i^2 <= 1, sum E (X_i)_+^3 <= beta,
// plus the exact finite-support verification harness.

#include "rosenthal3/version.hpp"
#include "rosenthal3/quadrature.hpp"
#include "rosenthal3/normal.hpp"
#include "rosenthal3/function_class.hpp"
#include "rosenthal3/bounds.hpp"
#include "rosenthal3/mixture.hpp"
#include "rosenthal3/verification.hpp"
#include "rosenthal3/serialization.hpp"
#include "rosenthal3/selftest.hpp"
