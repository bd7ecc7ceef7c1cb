#pragma once

#include "core.hpp"
#include "tower.hpp"
#include "madic.hpp"
#include "hmodule.hpp"
#include "heisenberg.hpp"
#include "haar.hpp"
#include "fractions.hpp"
#include "json.hpp"
