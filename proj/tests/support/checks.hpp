// Shared assertion helpers for the test binaries.
#pragma once

#include <cmath>

// Absolute-tolerance comparison; doctest's Approx is relative-only.
#define CHECK_ABS_TOL(actual, expected, tol) \
    CHECK(std::fabs((actual) - (expected)) <= (tol))

#define REQUIRE_ABS_TOL(actual, expected, tol) \
    REQUIRE(std::fabs((actual) - (expected)) <= (tol))
