#pragma once

#include "rsswipt/core.hpp"
#include "rsswipt/channel.hpp"
#include "rsswipt/physics.hpp"
#include "rsswipt/wmmse.hpp"
#include "rsswipt/solver/cone_program.hpp"
#include "rsswipt/solver/qcqp.hpp"
#include "rsswipt/subproblem.hpp"
#include "rsswipt/algorithms.hpp"
#include "rsswipt/experiments.hpp"
