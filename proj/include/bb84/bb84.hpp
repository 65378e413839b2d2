#pragma once

#include "bb84/adversary.hpp"
#include "bb84/amplification.hpp"
#include "bb84/errors.hpp"
#include "bb84/harness.hpp"
#include "bb84/protocol.hpp"
#include "bb84/quantum.hpp"
#include "bb84/random.hpp"
#include "bb84/report.hpp"
