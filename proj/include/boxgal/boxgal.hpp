#pragma once

// Umbrella header.

#include <boxgal/bounds.hpp>
#include <boxgal/core.hpp>
#include <boxgal/cyclotomic.hpp>
#include <boxgal/discprob.hpp>
#include <boxgal/ffpoly.hpp>
#include <boxgal/fourier.hpp>
#include <boxgal/galois_mc.hpp>
#include <boxgal/measures.hpp>
#include <boxgal/moebius_stats.hpp>
#include <boxgal/parallel.hpp>
#include <boxgal/runconfig.hpp>
#include <boxgal/torus.hpp>
