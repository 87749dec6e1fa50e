#pragma once

#include "specthresh/basis.hpp"
#include "specthresh/chain.hpp"
#include "specthresh/coeff_matrix.hpp"
#include "specthresh/error.hpp"
#include "specthresh/estimator.hpp"
#include "specthresh/harness.hpp"
#include "specthresh/io.hpp"
#include "specthresh/oracle.hpp"
#include "specthresh/quadrature.hpp"
