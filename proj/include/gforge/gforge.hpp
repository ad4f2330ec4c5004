#pragma once

#include "gforge/catalog.hpp"
#include "gforge/cyclo.hpp"
#include "gforge/error.hpp"
#include "gforge/galgebra.hpp"
#include "gforge/group.hpp"
#include "gforge/io.hpp"
#include "gforge/kform.hpp"
#include "gforge/polynomial.hpp"
#include "gforge/presentation.hpp"
#include "gforge/qlinalg.hpp"
#include "gforge/twisted.hpp"
#include "gforge/witness.hpp"
#include "gforge/zmod.hpp"
