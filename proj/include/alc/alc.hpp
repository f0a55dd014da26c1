#pragma once

#include "alc/decode.hpp"
#include "alc/error.hpp"
#include "alc/fracdim.hpp"
#include "alc/harness/config.hpp"
#include "alc/harness/experiments.hpp"
#include "alc/harness/trials.hpp"
#include "alc/measureop.hpp"
#include "alc/rng.hpp"
#include "alc/setgen.hpp"
