// povgrid/povgrid.hpp - umbrella header.
#pragma once

#include "povgrid/belief.hpp"
#include "povgrid/checkpoint.hpp"
#include "povgrid/csv.hpp"
#include "povgrid/dqn.hpp"
#include "povgrid/encode.hpp"
#include "povgrid/episode.hpp"
#include "povgrid/errors.hpp"
#include "povgrid/experiment.hpp"
#include "povgrid/grad_check.hpp"
#include "povgrid/grid.hpp"
#include "povgrid/layers.hpp"
#include "povgrid/metrics.hpp"
#include "povgrid/optim.hpp"
#include "povgrid/oracle.hpp"
#include "povgrid/policy.hpp"
#include "povgrid/qnet.hpp"
#include "povgrid/replay.hpp"
#include "povgrid/rng.hpp"
#include "povgrid/selfcheck.hpp"
#include "povgrid/tensor.hpp"
#include "povgrid/world.hpp"
