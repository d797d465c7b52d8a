#pragma once

#include "flexdesign/audit.hpp"
#include "flexdesign/construct.hpp"
#include "flexdesign/errors.hpp"
#include "flexdesign/experiment.hpp"
#include "flexdesign/flow.hpp"
#include "flexdesign/json_io.hpp"
#include "flexdesign/rng.hpp"
#include "flexdesign/system.hpp"
