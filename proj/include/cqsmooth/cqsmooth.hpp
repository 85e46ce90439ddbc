#pragma once

// Umbrella header for the whole library.

#include "cqsmooth/bigint.hpp"
#include "cqsmooth/conegeom.hpp"
#include "cqsmooth/contfrac.hpp"
#include "cqsmooth/deformpoly.hpp"
#include "cqsmooth/fillings.hpp"
#include "cqsmooth/hull_oracle.hpp"
#include "cqsmooth/matrix.hpp"
#include "cqsmooth/multipoly.hpp"
#include "cqsmooth/report.hpp"
#include "cqsmooth/toricfan.hpp"
#include "cqsmooth/zeroseq.hpp"
