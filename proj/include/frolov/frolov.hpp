#pragma once

#include "frolov/errors.hpp"
#include "frolov/numeric.hpp"
#include "frolov/rule.hpp"
#include "frolov/lattice.hpp"
#include "frolov/kernels.hpp"
#include "frolov/transforms.hpp"
#include "frolov/differences.hpp"
#include "frolov/harness.hpp"
#include "frolov/verify.hpp"
