#pragma once

#include "qkdlab/qcore/errors.hpp"
#include "qkdlab/qcore/gate.hpp"
#include "qkdlab/qcore/ops.hpp"
#include "qkdlab/qcore/rng.hpp"
#include "qkdlab/qcore/state.hpp"
