#include "ucsched/driver.hpp"
#include "ucsched/oracle.hpp"
int main() { return 0; }
