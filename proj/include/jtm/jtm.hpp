#pragma once

#include "jtm/color.hpp"
#include "jtm/eval.hpp"
#include "jtm/image_io.hpp"
#include "jtm/parallel.hpp"
#include "jtm/raster.hpp"
#include "jtm/skeleton.hpp"
#include "jtm/synth.hpp"
#include "jtm/trajectory.hpp"
