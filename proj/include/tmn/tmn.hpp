#pragma once

#include "tmn/control.hpp"
#include "tmn/cycles.hpp"
#include "tmn/demo.hpp"
#include "tmn/digester.hpp"
#include "tmn/engine.hpp"
#include "tmn/error.hpp"
#include "tmn/flow_solve.hpp"
#include "tmn/hub.hpp"
#include "tmn/network.hpp"
#include "tmn/network_io.hpp"
#include "tmn/params_io.hpp"
#include "tmn/reservoir.hpp"
#include "tmn/rk4.hpp"
#include "tmn/trajectory.hpp"
#include "tmn/truck.hpp"
