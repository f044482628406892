#pragma once

#include "wanet/config.hpp"
#include "wanet/diagnostics.hpp"
#include "wanet/ensemble.hpp"
#include "wanet/epidemic.hpp"
#include "wanet/geometry.hpp"
#include "wanet/mobility.hpp"
#include "wanet/output.hpp"
#include "wanet/radio.hpp"
#include "wanet/rng.hpp"
#include "wanet/topology.hpp"
