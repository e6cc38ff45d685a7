// SPDX-License-Identifier: Apache-2.0
#ifndef RADIALBORN_RADIALBORN_HPP
#define RADIALBORN_RADIALBORN_HPP

#include "radialborn/born.hpp"
#include "radialborn/calculus.hpp"
#include "radialborn/conductivity.hpp"
#include "radialborn/constants.hpp"
#include "radialborn/errors.hpp"
#include "radialborn/forward.hpp"
#include "radialborn/halfline.hpp"
#include "radialborn/inverse.hpp"
#include "radialborn/profile.hpp"
#include "radialborn/spectral.hpp"
#include "radialborn/weyl.hpp"

#endif
