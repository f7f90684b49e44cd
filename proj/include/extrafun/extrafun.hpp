#pragma once
// Umbrella header for the extrafunction calculus library.

#include "errors.hpp"
#include "expr.hpp"
#include "seminorm.hpp"
#include "hyperspace.hpp"
#include "topology.hpp"
#include "bundle.hpp"
#include "random.hpp"
