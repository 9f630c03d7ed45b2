#pragma once

#include "liesym/atom.hpp"
#include "liesym/determining.hpp"
#include "liesym/equations.hpp"
#include "liesym/errors.hpp"
#include "liesym/explicit_prolongation.hpp"
#include "liesym/generators.hpp"
#include "liesym/group.hpp"
#include "liesym/jet.hpp"
#include "liesym/lie_algebra.hpp"
#include "liesym/linalg.hpp"
#include "liesym/matrix.hpp"
#include "liesym/parser.hpp"
#include "liesym/polynomial.hpp"
#include "liesym/prolongation.hpp"
#include "liesym/rational.hpp"
#include "liesym/residual.hpp"
#include "liesym/sampling.hpp"
#include "liesym/solution.hpp"
#include "liesym/symmetry.hpp"
