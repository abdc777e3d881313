#pragma once

#include "pabeam/adaptive.hpp"
#include "pabeam/channel_io.hpp"
#include "pabeam/classic.hpp"
#include "pabeam/config.hpp"
#include "pabeam/core.hpp"
#include "pabeam/delay.hpp"
#include "pabeam/dsp.hpp"
#include "pabeam/hybrid.hpp"
#include "pabeam/imaging.hpp"
#include "pabeam/metrics.hpp"
#include "pabeam/pipeline.hpp"
#include "pabeam/synth.hpp"
