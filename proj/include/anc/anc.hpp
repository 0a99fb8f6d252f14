#pragma once

#include "anc/amplitude.hpp"
#include "anc/channel.hpp"
#include "anc/decoder.hpp"
#include "anc/errors.hpp"
#include "anc/harness.hpp"
#include "anc/modem.hpp"
#include "anc/phase_solver.hpp"
#include "anc/plot.hpp"
#include "anc/rng.hpp"
#include "anc/types.hpp"
