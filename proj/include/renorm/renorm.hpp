#pragma once

#include "renorm/ascent.hpp"
#include "renorm/config.hpp"
#include "renorm/coords.hpp"
#include "renorm/gauge.hpp"
#include "renorm/norm_oracle.hpp"
#include "renorm/probes.hpp"
#include "renorm/slice/omega.hpp"
#include "renorm/slice/slice_norm.hpp"
#include "renorm/c0/bump.hpp"
#include "renorm/c0/dual_witness.hpp"
#include "renorm/c0/level_set.hpp"
#include "renorm/c0/polyhedral.hpp"
#include "renorm/c0/schedule.hpp"
#include "renorm/c0/smoothing.hpp"
#include "renorm/testkit.hpp"
