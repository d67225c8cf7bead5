#pragma once

#include "mixdist/analysis.hpp"
#include "mixdist/dataset.hpp"
#include "mixdist/dissimilarity.hpp"
#include "mixdist/distance.hpp"
#include "mixdist/error.hpp"
#include "mixdist/expected.hpp"
#include "mixdist/io.hpp"
#include "mixdist/parallel.hpp"
#include "mixdist/rng.hpp"
#include "mixdist/scaling.hpp"
#include "mixdist/simulation.hpp"
