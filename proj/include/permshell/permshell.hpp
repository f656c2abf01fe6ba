#pragma once

#include "permshell/assignment.hpp"
#include "permshell/bigint.hpp"
#include "permshell/constellation.hpp"
#include "permshell/demap.hpp"
#include "permshell/error.hpp"
#include "permshell/ldpc.hpp"
#include "permshell/permcode.hpp"
#include "permshell/presets.hpp"
#include "permshell/shellcode.hpp"
#include "permshell/simharness.hpp"
#include "permshell/stats.hpp"
#include "permshell/trellis.hpp"
