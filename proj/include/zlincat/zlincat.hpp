#pragma once

#include "zlincat/intlin.hpp"
#include "zlincat/category.hpp"
#include "zlincat/completion.hpp"
#include "zlincat/ring.hpp"
#include "zlincat/modules.hpp"
#include "zlincat/resolutions.hpp"
#include "zlincat/k0.hpp"
#include "zlincat/builders.hpp"
#include "zlincat/io.hpp"
