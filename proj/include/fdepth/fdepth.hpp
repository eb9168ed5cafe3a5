#pragma once

#include "fdepth/audit.hpp"
#include "fdepth/core.hpp"
#include "fdepth/csv.hpp"
#include "fdepth/depths.hpp"
#include "fdepth/distributions.hpp"
#include "fdepth/envelope.hpp"
#include "fdepth/ranking.hpp"
#include "fdepth/reconstruct.hpp"
#include "fdepth/rice.hpp"
