#pragma once

#include "blm/conjugate.hpp"
#include "blm/distributions.hpp"
#include "blm/dlm.hpp"
#include "blm/errors.hpp"
#include "blm/evidence.hpp"
#include "blm/gp.hpp"
#include "blm/linalg.hpp"
#include "blm/predictive.hpp"
#include "blm/special_functions.hpp"
