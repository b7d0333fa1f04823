#pragma once

#include "stbclab/channel.hpp"
#include "stbclab/constellation.hpp"
#include "stbclab/csv.hpp"
#include "stbclab/decode.hpp"
#include "stbclab/diversity.hpp"
#include "stbclab/encode.hpp"
#include "stbclab/matrix.hpp"
#include "stbclab/montecarlo.hpp"
#include "stbclab/plot.hpp"
#include "stbclab/rng.hpp"
#include "stbclab/schemes.hpp"
