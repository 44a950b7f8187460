#pragma once

// Umbrella header for the biphoton sensing library.

#include "biphoton/fisher.hpp"
#include "biphoton/gauss_hermite.hpp"
#include "biphoton/hom.hpp"
#include "biphoton/io.hpp"
#include "biphoton/model.hpp"
#include "biphoton/noon.hpp"
#include "biphoton/quadrature.hpp"
#include "biphoton/rng.hpp"
#include "biphoton/simulation.hpp"
#include "biphoton/strategy.hpp"
#include "biphoton/types.hpp"
