#ifndef LEDFANO_LEDFANO_HPP
#define LEDFANO_LEDFANO_HPP

#include "ledfano/analytic.hpp"
#include "ledfano/config.hpp"
#include "ledfano/constants.hpp"
#include "ledfano/langevin.hpp"
#include "ledfano/params.hpp"
#include "ledfano/qw_semission.hpp"
#include "ledfano/rng.hpp"
#include "ledfano/spectrum.hpp"
#include "ledfano/steady_state.hpp"
#include "ledfano/version.hpp"

#endif
