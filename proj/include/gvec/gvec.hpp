// Umbrella header.
#pragma once

#include "gvec/bench.hpp"
#include "gvec/bpm.hpp"
#include "gvec/codec.hpp"
#include "gvec/decode.hpp"
#include "gvec/geometry.hpp"
#include "gvec/io.hpp"
#include "gvec/metrics.hpp"
#include "gvec/types.hpp"
