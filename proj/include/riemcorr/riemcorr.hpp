#pragma once

// Umbrella header for the whole library.

#include "riemcorr/dependence.hpp"
#include "riemcorr/errors.hpp"
#include "riemcorr/frechet.hpp"
#include "riemcorr/geometry.hpp"
#include "riemcorr/io.hpp"
#include "riemcorr/linalg.hpp"
#include "riemcorr/manifold.hpp"
#include "riemcorr/parallel.hpp"
#include "riemcorr/rng.hpp"
#include "riemcorr/simulation.hpp"
#include "riemcorr/so3.hpp"
#include "riemcorr/sphere.hpp"
