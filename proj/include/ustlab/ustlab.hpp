#pragma once

#include "ustlab/anticonc.hpp"
#include "ustlab/error.hpp"
#include "ustlab/exact_count.hpp"
#include "ustlab/graph.hpp"
#include "ustlab/graph_io.hpp"
#include "ustlab/graph_spec.hpp"
#include "ustlab/leaf_reconfig.hpp"
#include "ustlab/parallel.hpp"
#include "ustlab/rng.hpp"
#include "ustlab/sampler.hpp"
#include "ustlab/spanning_tree.hpp"
#include "ustlab/stats.hpp"
#include "ustlab/tree_iso.hpp"
