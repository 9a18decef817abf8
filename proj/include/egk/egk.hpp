#pragma once

#include "egk/error.hpp"
#include "egk/log_complex.hpp"
#include "egk/special.hpp"
#include "egk/quadrature.hpp"
#include "egk/model.hpp"
#include "egk/saddle.hpp"
#include "egk/exact_kernels.hpp"
#include "egk/asymptotics.hpp"
#include "egk/parallel.hpp"
#include "egk/sampler.hpp"
#include "egk/studies.hpp"
#include "egk/verify.hpp"
