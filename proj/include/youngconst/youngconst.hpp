#pragma once

#include "youngconst/rational.hpp"
#include "youngconst/exponents.hpp"
#include "youngconst/constants.hpp"
#include "youngconst/catalog.hpp"
#include "youngconst/quadrature.hpp"
#include "youngconst/groups.hpp"
#include "youngconst/convolution.hpp"
#include "youngconst/estimator.hpp"
#include "youngconst/quotient.hpp"
#include "youngconst/proof_harness.hpp"
#include "youngconst/sampling.hpp"
#include "youngconst/io.hpp"
#include "youngconst/verify.hpp"
