#pragma once

// Umbrella header.

#include "walldual/common.hpp"
#include "walldual/wallspace.hpp"
#include "walldual/chain_system.hpp"
#include "walldual/dual_space.hpp"
#include "walldual/paths.hpp"
#include "walldual/geometry_checks.hpp"
#include "walldual/metric_graph.hpp"
#include "walldual/curtains.hpp"
#include "walldual/fixtures.hpp"
#include "walldual/io.hpp"
