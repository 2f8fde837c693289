#pragma once

#include "plap/curve.hpp"
#include "plap/diagnostics.hpp"
#include "plap/error.hpp"
#include "plap/ivp.hpp"
#include "plap/model.hpp"
#include "plap/phi.hpp"
#include "plap/power_sum.hpp"
#include "plap/shoot.hpp"
#include "plap/timemap.hpp"
