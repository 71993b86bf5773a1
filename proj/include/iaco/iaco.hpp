#pragma once

// Umbrella header. http_routes.hpp is left out so that the core does not pull in the
// HTTP transport.

#include "colony.hpp"
#include "construction.hpp"
#include "episode_log.hpp"
#include "fitness.hpp"
#include "generator.hpp"
#include "pareto.hpp"
#include "pheromone.hpp"
#include "problem.hpp"
#include "problem_io.hpp"
#include "random.hpp"
#include "service.hpp"
#include "session.hpp"
#include "surrogate.hpp"
