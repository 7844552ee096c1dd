#pragma once

#include "cvrp_itp/analysis.hpp"
#include "cvrp_itp/bounds.hpp"
#include "cvrp_itp/core.hpp"
#include "cvrp_itp/errors.hpp"
#include "cvrp_itp/experiment.hpp"
#include "cvrp_itp/itp.hpp"
#include "cvrp_itp/json_io.hpp"
#include "cvrp_itp/mixed.hpp"
#include "cvrp_itp/multidepot.hpp"
#include "cvrp_itp/nearest_neighbor.hpp"
#include "cvrp_itp/parallel.hpp"
#include "cvrp_itp/rng.hpp"
#include "cvrp_itp/svg_plot.hpp"
#include "cvrp_itp/tsp.hpp"
