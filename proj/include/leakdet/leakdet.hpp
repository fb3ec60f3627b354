#pragma once

// Umbrella include for the acoustic leak-detector model.

#include "leakdet/adc.hpp"
#include "leakdet/analog_chain.hpp"
#include "leakdet/biquad.hpp"
#include "leakdet/csv.hpp"
#include "leakdet/detector.hpp"
#include "leakdet/fft.hpp"
#include "leakdet/pipeline.hpp"
#include "leakdet/power.hpp"
#include "leakdet/protocol.hpp"
#include "leakdet/resonator.hpp"
#include "leakdet/rng.hpp"
#include "leakdet/scenario_file.hpp"
#include "leakdet/sweep.hpp"
#include "leakdet/synth.hpp"
