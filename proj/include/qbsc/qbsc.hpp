#pragma once

// Umbrella header for the LOCKCOM laboratory: quantum linear algebra,
// labeled-state ensembles, information measures, two-universal hashing,
// commitment protocols and the constructive attacks around them.

#include "qbsc/attack.hpp"
#include "qbsc/cli.hpp"
#include "qbsc/ensemble.hpp"
#include "qbsc/hash.hpp"
#include "qbsc/info.hpp"
#include "qbsc/matrix.hpp"
#include "qbsc/protocol.hpp"
#include "qbsc/report_json.hpp"
#include "qbsc/rng.hpp"
#include "qbsc/spectral.hpp"
#include "qbsc/state.hpp"
