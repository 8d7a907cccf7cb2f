#pragma once

// Umbrella header for the mcdist library.

#include "mcdist/channel.hpp"
#include "mcdist/commands.hpp"
#include "mcdist/design.hpp"
#include "mcdist/distortion.hpp"
#include "mcdist/io.hpp"
#include "mcdist/scenario.hpp"
#include "mcdist/timedomain.hpp"
#include "mcdist/tridiagonal.hpp"
#include "mcdist/version.hpp"
