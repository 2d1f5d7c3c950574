#pragma once

#include "maxpol/errors.hpp"
#include "maxpol/rational.hpp"
#include "maxpol/exact.hpp"
#include "maxpol/kernels.hpp"
#include "maxpol/response.hpp"
#include "maxpol/diffmatrix.hpp"
#include "maxpol/tensorops.hpp"
#include "maxpol/spectral.hpp"
#include "maxpol/spectral_extended.hpp"
#include "maxpol/recover.hpp"
#include "maxpol/rng.hpp"
#include "maxpol/experiments.hpp"
#include "maxpol/io.hpp"
