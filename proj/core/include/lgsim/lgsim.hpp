#pragma once

#include "lgsim/cmatrix.hpp"
#include "lgsim/error.hpp"
#include "lgsim/expsim.hpp"
#include "lgsim/filters.hpp"
#include "lgsim/json_io.hpp"
#include "lgsim/nonlocality.hpp"
#include "lgsim/quantum.hpp"
#include "lgsim/temporal.hpp"
