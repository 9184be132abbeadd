#pragma once

#include "pathlab/bench.hpp"
#include "pathlab/geometry.hpp"
#include "pathlab/graph.hpp"
#include "pathlab/json_io.hpp"
#include "pathlab/planar_optimum.hpp"
#include "pathlab/planners.hpp"
#include "pathlab/rgg.hpp"
#include "pathlab/sampling.hpp"
#include "pathlab/spatial_index.hpp"
#include "pathlab/svg.hpp"
