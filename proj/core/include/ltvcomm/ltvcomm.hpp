#pragma once

#include "ltvcomm/commute.hpp"
#include "ltvcomm/expr.hpp"
#include "ltvcomm/json.hpp"
#include "ltvcomm/sim.hpp"
#include "ltvcomm/system.hpp"
