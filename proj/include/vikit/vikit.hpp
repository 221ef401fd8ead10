#ifndef VIKIT_VIKIT_HPP
#define VIKIT_VIKIT_HPP

#include "common.hpp"
#include "geometry.hpp"
#include "expr.hpp"
#include "operators.hpp"
#include "vi.hpp"
#include "solvers.hpp"
#include "checkers.hpp"
#include "instance_io.hpp"
#include "reproduce.hpp"

#endif
