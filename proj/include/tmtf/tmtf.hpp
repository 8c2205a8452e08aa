#pragma once

#include "tmtf/binning.hpp"
#include "tmtf/diagnostics.hpp"
#include "tmtf/error.hpp"
#include "tmtf/field.hpp"
#include "tmtf/io.hpp"
#include "tmtf/matrix.hpp"
#include "tmtf/synth.hpp"
#include "tmtf/transition.hpp"
