#pragma once

#include "alc/decode/collision.hpp"
#include "alc/decode/interleave.hpp"
#include "alc/decode/kron.hpp"
#include "alc/decode/l0.hpp"
#include "alc/decode/outcome.hpp"
