#include "catch2/catch_amalgamated.hpp"
#include "ucsched/driver.hpp"
#include "ucsched/oracle.hpp"
TEST_CASE("placeholder test_pra") { REQUIRE(true); }
