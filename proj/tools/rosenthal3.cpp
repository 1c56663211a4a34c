#include <iostream>

#include "rosenthal3/cli.hpp"

int main(int argc, char** argv) {
    return rosenthal3::cli::run(argc, argv, std::cout, std::cerr);
}
