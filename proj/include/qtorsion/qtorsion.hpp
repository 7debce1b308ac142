#pragma once

#include "cli.hpp"
#include "io.hpp"
#include "pearl_models.hpp"
#include "spectral.hpp"
#include "superpotential.hpp"
#include "threefold_ring.hpp"
#include "torsion.hpp"
#include "verifier.hpp"
