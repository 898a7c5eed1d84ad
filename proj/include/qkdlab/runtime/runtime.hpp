#pragma once

#include "qkdlab/runtime/board.hpp"
#include "qkdlab/runtime/channel.hpp"
#include "qkdlab/runtime/custody.hpp"
#include "qkdlab/runtime/party.hpp"
#include "qkdlab/runtime/session.hpp"
#include "qkdlab/runtime/transcript.hpp"
