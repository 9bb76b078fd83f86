#pragma once

#include "agents.hpp"
#include "config.hpp"
#include "decision.hpp"
#include "dynamics.hpp"
#include "gain.hpp"
#include "params.hpp"
#include "polyfit.hpp"
#include "results.hpp"
#include "sde.hpp"
#include "sprt.hpp"
#include "sweep.hpp"
#include "transform.hpp"
