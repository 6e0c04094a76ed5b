#pragma once

// Umbrella header: 2D cellular-automaton image encryption over GF(2),
// the runs-test randomness score, and the statistical analysis helpers.

#include "ca2d/analysis.hpp"
#include "ca2d/cipher.hpp"
#include "ca2d/errors.hpp"
#include "ca2d/gf2.hpp"
#include "ca2d/image.hpp"
#include "ca2d/rng.hpp"
#include "ca2d/rules.hpp"
#include "ca2d/runs_test.hpp"
