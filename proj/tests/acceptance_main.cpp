#include <iostream>

#include "rosenthal3/selftest.hpp"

int main() {
    return rosenthal3::run_acceptance(std::cout) ? 0 : 1;
}
