#include <iostream>

#include "ktuple/cli.hpp"

int main(int argc, char** argv) {
    return ktuple::cli::run({argv + 1, argv + argc}, std::cout, std::cerr);
}
