#pragma once

#include "latspec/errors.hpp"
#include "latspec/rational.hpp"
#include "latspec/matrix.hpp"
#include "latspec/bigfloat.hpp"
#include "latspec/lattice.hpp"
#include "latspec/reduction.hpp"
#include "latspec/volume.hpp"
#include "latspec/discrepancy.hpp"
#include "latspec/constructions.hpp"
#include "latspec/bounds.hpp"
#include "latspec/io.hpp"
