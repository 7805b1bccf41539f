#pragma once

#include "nsnorm/balance_audit.hpp"
#include "nsnorm/constants.hpp"
#include "nsnorm/errors.hpp"
#include "nsnorm/field.hpp"
#include "nsnorm/fixtures.hpp"
#include "nsnorm/grid.hpp"
#include "nsnorm/io.hpp"
#include "nsnorm/norms.hpp"
#include "nsnorm/regularity.hpp"
#include "nsnorm/scaling.hpp"
#include "nsnorm/solver.hpp"
