#pragma once

#include "pac/bits.hpp"
#include "pac/channel.hpp"
#include "pac/codec_core.hpp"
#include "pac/conv_precoder.hpp"
#include "pac/flip_decoder.hpp"
#include "pac/list_decoder.hpp"
#include "pac/report.hpp"
#include "pac/sim_harness.hpp"
