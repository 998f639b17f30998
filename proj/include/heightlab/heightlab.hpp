#pragma once

#include "heightlab/coadjoint.hpp"
#include "heightlab/counting.hpp"
#include "heightlab/enveloping.hpp"
#include "heightlab/geometry.hpp"
#include "heightlab/group_law.hpp"
#include "heightlab/lie_algebra.hpp"
#include "heightlab/verify.hpp"
#include "heightlab/zeta.hpp"
