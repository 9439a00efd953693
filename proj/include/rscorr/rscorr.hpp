#pragma once

#include "rscorr/appendix.hpp"
#include "rscorr/dyadic.hpp"
#include "rscorr/engine.hpp"
#include "rscorr/level_sets.hpp"
#include "rscorr/linear_solve.hpp"
#include "rscorr/matrix.hpp"
#include "rscorr/oracle.hpp"
#include "rscorr/query.hpp"
#include "rscorr/renorm.hpp"
#include "rscorr/self_consistent.hpp"
#include "rscorr/sequences.hpp"
#include "rscorr/verification.hpp"
