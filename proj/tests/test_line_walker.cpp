#include <gtest/gtest.h>
#include "curvepolish/bench.hpp"
TEST(Placeholder, Compiles) { SUCCEED(); }
