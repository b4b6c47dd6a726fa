#pragma once

#include "flatclass/types.hpp"
#include "flatclass/rank_table.hpp"
#include "flatclass/gf.hpp"
#include "flatclass/matroid.hpp"
#include "flatclass/linear.hpp"
#include "flatclass/canonical.hpp"
#include "flatclass/io.hpp"
#include "flatclass/classes.hpp"
#include "flatclass/parallel.hpp"
#include "flatclass/enumeration.hpp"
#include "flatclass/apex.hpp"
#include "flatclass/verify.hpp"
