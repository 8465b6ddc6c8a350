#pragma once

#include "errors.hpp"
#include "io.hpp"
#include "quadrature.hpp"
#include "profiles.hpp"
#include "chain.hpp"
#include "propagate.hpp"
#include "solvable.hpp"
#include "factorization.hpp"
#include "classical.hpp"
