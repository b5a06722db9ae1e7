#pragma once

#include "secpolar/bits.hpp"
#include "secpolar/channels.hpp"
#include "secpolar/codec.hpp"
#include "secpolar/config.hpp"
#include "secpolar/csv.hpp"
#include "secpolar/experiment.hpp"
#include "secpolar/metrics.hpp"
#include "secpolar/partition.hpp"
#include "secpolar/polarization.hpp"
#include "secpolar/rng.hpp"
#include "secpolar/schemes.hpp"
