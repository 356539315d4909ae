#pragma once

#include "socialist/modarith.hpp"
#include "socialist/primes.hpp"
#include "socialist/polycong.hpp"
#include "socialist/filters.hpp"
#include "socialist/verifier.hpp"
#include "socialist/engine.hpp"
#include "socialist/analytics.hpp"
