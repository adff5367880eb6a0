#pragma once

#include "cauchyfact/atoms.hpp"
#include "cauchyfact/cauchy.hpp"
#include "cauchyfact/commutator.hpp"
#include "cauchyfact/curve.hpp"
#include "cauchyfact/error.hpp"
#include "cauchyfact/factorization.hpp"
#include "cauchyfact/format.hpp"
#include "cauchyfact/functions.hpp"
#include "cauchyfact/grid.hpp"
#include "cauchyfact/spaces.hpp"
