#pragma once

// Umbrella header for the perspective-function calculus library.

#include "perspectra/errors.hpp"
#include "perspectra/extreal.hpp"
#include "perspectra/linalg.hpp"
#include "perspectra/convex_function.hpp"
#include "perspectra/catalog.hpp"
#include "perspectra/perspective.hpp"
#include "perspectra/calculus.hpp"
#include "perspectra/divergences.hpp"
#include "perspectra/functionals.hpp"
#include "perspectra/verify.hpp"
