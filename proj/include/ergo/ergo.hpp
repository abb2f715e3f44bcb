#pragma once

#include "ergo/error.hpp"
#include "ergo/spectral.hpp"
#include "ergo/states.hpp"
#include "ergo/ergotropy.hpp"
#include "ergo/mixing.hpp"
#include "ergo/majorization.hpp"
#include "ergo/oracle.hpp"
