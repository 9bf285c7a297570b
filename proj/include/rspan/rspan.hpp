#ifndef RSPAN_RSPAN_HPP
#define RSPAN_RSPAN_HPP

#include "rspan/error.hpp"
#include "rspan/expanders.hpp"
#include "rspan/graph.hpp"
#include "rspan/harness.hpp"
#include "rspan/io.hpp"
#include "rspan/lso.hpp"
#include "rspan/parallel.hpp"
#include "rspan/quadtree.hpp"
#include "rspan/ratio.hpp"
#include "rspan/rng.hpp"
#include "rspan/shadow.hpp"
#include "rspan/spanner1d.hpp"
#include "rspan/spanner_euclidean.hpp"

#endif  // RSPAN_RSPAN_HPP
