#pragma once

#include "zbesov/error.hpp"
#include "zbesov/grid.hpp"
#include "zbesov/bump.hpp"
#include "zbesov/constructions.hpp"
#include "zbesov/render.hpp"
#include "zbesov/atomic_field.hpp"
#include "zbesov/smoothness.hpp"
#include "zbesov/lorentz.hpp"
#include "zbesov/analysis.hpp"
#include "zbesov/oracle.hpp"
#include "zbesov/validate.hpp"
#include "zbesov/io.hpp"
#include "zbesov/plot.hpp"
#include "zbesov/cli.hpp"
