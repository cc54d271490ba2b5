#pragma once

#include "rphc/alc.hpp"
#include "rphc/bench.hpp"
#include "rphc/candidates.hpp"
#include "rphc/dendrogram.hpp"
#include "rphc/evaluation.hpp"
#include "rphc/geometry.hpp"
#include "rphc/io.hpp"
#include "rphc/oracle.hpp"
#include "rphc/parallel.hpp"
#include "rphc/partition.hpp"
#include "rphc/rng.hpp"
#include "rphc/slc.hpp"
