#pragma once

// Generalized matrix approximation, min_X ||A - M X N||_F: the exact
// pseudoinverse solver, sketched solvers (CountSketch+Gaussian and
// leverage-score sampling) with a (1+eps) relative-error target, and the
// statistical certificates that check the guarantee empirically.

#include "gma/bench.hpp"
#include "gma/common.hpp"
#include "gma/dense_matrix.hpp"
#include "gma/linalg.hpp"
#include "gma/matrix_market.hpp"
#include "gma/rng.hpp"
#include "gma/sketch.hpp"
#include "gma/solver.hpp"
#include "gma/sparse_matrix.hpp"
#include "gma/svd.hpp"
#include "gma/synthetic.hpp"
#include "gma/verify.hpp"
