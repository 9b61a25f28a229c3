#pragma once

#include "andkit/builder.hpp"
#include "andkit/cluster.hpp"
#include "andkit/config.hpp"
#include "andkit/disambig.hpp"
#include "andkit/error.hpp"
#include "andkit/ingest.hpp"
#include "andkit/linker.hpp"
#include "andkit/metrics.hpp"
#include "andkit/namekit.hpp"
#include "andkit/pipeline.hpp"
#include "andkit/profiler.hpp"
#include "andkit/synth.hpp"
#include "andkit/types.hpp"
#include "andkit/util.hpp"
