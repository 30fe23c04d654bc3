#pragma once

// Everything: expression engine, symbol calculus, pipelines, oracles and run configuration.

#include "symdet/claims.hpp"
#include "symdet/config.hpp"
