#pragma once

#include "ultranorm/error.hpp"
#include "ultranorm/rational.hpp"
#include "ultranorm/valfield.hpp"
#include "ultranorm/diagonal_norm.hpp"
#include "ultranorm/joint.hpp"
#include "ultranorm/spectral.hpp"
#include "ultranorm/operations.hpp"
#include "ultranorm/oracles.hpp"
#include "ultranorm/parallel.hpp"
#include "ultranorm/graded/ring.hpp"
#include "ultranorm/graded/profile.hpp"
#include "ultranorm/graded/expr.hpp"
#include "ultranorm/graded/analysis.hpp"
#include "ultranorm/experiments.hpp"
#include "ultranorm/io.hpp"
